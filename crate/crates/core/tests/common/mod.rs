#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conedepth::WeightedSample;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn triangle() -> WeightedSample {
    WeightedSample::uniform(vec![vec![0.0, 1.0], vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap()
}

pub fn simplex3d() -> WeightedSample {
    WeightedSample::uniform(vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ])
    .unwrap()
}

pub fn six_atoms() -> WeightedSample {
    WeightedSample::uniform(vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![2.0, 0.0],
        vec![-2.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
    ])
    .unwrap()
}

/// Shapes of planar test clouds, from generic to adversarial.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Continuous,
    Grid(i32),
    Collinear,
    Duplicates,
}

pub fn random_shape(rng: &mut ChaCha8Rng) -> Shape {
    match rng.random_range(0..4) {
        0 => Shape::Continuous,
        1 => Shape::Grid(rng.random_range(1..=4)),
        2 => Shape::Collinear,
        _ => Shape::Duplicates,
    }
}

pub fn planar_points(rng: &mut ChaCha8Rng, n: usize, shape: Shape) -> Vec<Vec<f64>> {
    match shape {
        Shape::Continuous => (0..n).map(|_| vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).collect(),
        Shape::Grid(k) => {
            (0..n).map(|_| vec![rng.random_range(-k..=k) as f64, rng.random_range(-k..=k) as f64]).collect()
        }
        Shape::Collinear => {
            let (dx, dy) = (rng.random_range(-3..=3) as f64, rng.random_range(-3..=3) as f64);
            let (dx, dy) = if dx == 0.0 && dy == 0.0 { (1.0, 2.0) } else { (dx, dy) };
            let (ox, oy) = (rng.random_range(-2..=2) as f64, rng.random_range(-2..=2) as f64);
            (0..n)
                .map(|_| {
                    let t = rng.random_range(-4..=4) as f64;
                    vec![ox + t * dx, oy + t * dy]
                })
                .collect()
        }
        Shape::Duplicates => {
            let k = (n / 3).max(1);
            let base = planar_points(rng, k, Shape::Grid(3));
            (0..n).map(|_| base.choose(rng).unwrap().clone()).collect()
        }
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    if rng.random_bool(0.5) {
        (0..n).map(|_| rng.random_range(1..=9) as f64).collect()
    } else {
        (0..n).map(|_| rng.random_range(0.05..1.0)).collect()
    }
}

pub fn random_planar_sample(rng: &mut ChaCha8Rng, n: usize) -> WeightedSample {
    let shape = random_shape(rng);
    let pts = planar_points(rng, n, shape);
    let w = random_weights(rng, n);
    WeightedSample::new(pts, w).unwrap()
}

/// A query near the cloud: an atom, a midpoint of atoms, or a grid point.
pub fn random_query(rng: &mut ChaCha8Rng, s: &WeightedSample) -> Vec<f64> {
    let n = s.len();
    match rng.random_range(0..4) {
        0 => s.point(rng.random_range(0..n)).to_vec(),
        1 => {
            let (a, b) = (s.point(rng.random_range(0..n)), s.point(rng.random_range(0..n)));
            vec![0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
        }
        2 => vec![rng.random_range(-8..=8) as f64 * 0.5, rng.random_range(-8..=8) as f64 * 0.5],
        _ => vec![rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)],
    }
}
