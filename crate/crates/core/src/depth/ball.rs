use std::cmp::Ordering;
use std::f64::consts::TAU;

use super::{check_finite, DepthFamily, DepthValue};
use crate::error::{check_dim, Error, Result};
use crate::exact::Dyadic;
use crate::mass::Mass;
use crate::measure::{dist, WeightedSample};
#[allow(unused_imports)]
use crate::par::{maybe_par_iter, prelude::*};

/// Above this sample size circumcircles of triples are skipped.
const TRIPLE_MAX_POINTS: usize = 40;

/// Closed ball with an exact membership test on its `f64` center and radius.
struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    /// Sign of `|p - c|^2 - r^2`.
    fn side(&self, p: &[f64]) -> Ordering {
        let mut s = 0.0;
        for (a, c) in p.iter().zip(&self.center) {
            s += (a - c) * (a - c);
        }
        let r2 = self.radius * self.radius;
        let bound = 1e-13 * (s + r2);
        let diff = s - r2;
        if diff.is_finite() && bound.is_finite() && diff.abs() > bound && bound > 1e-280 {
            return if diff > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        let r = Dyadic::from_f64(self.radius);
        let d2 = p.iter().zip(&self.center).fold(Dyadic::zero(), |acc, (&a, &c)| {
            let t = &Dyadic::from_f64(a) - &Dyadic::from_f64(c);
            &acc + &(&t * &t)
        });
        d2.cmp_exact(&(&r * &r))
    }

    /// Mass of the ball, or `None` unless `x` lies strictly outside.
    fn mass_excluding(&self, x: &[f64], sample: &WeightedSample) -> Option<Mass> {
        if self.center.iter().any(|c| !c.is_finite()) || !self.radius.is_finite() {
            return None;
        }
        if self.side(x) != Ordering::Greater {
            return None;
        }
        Some(sample.mass_where(|p| self.side(p) != Ordering::Greater))
    }
}

/// Depth for complements of closed balls of radius at most `radius_cap`.
///
/// `1 - sup P(B)` over the candidate balls `B` not containing `x`: large
/// balls of radius `radius_cap` touching a hyperplane just beyond `x` along
/// a set of candidate directions, plus the smallest balls through single
/// atoms, pairs and triples. Only genuine balls are counted, so the result is an
/// upper bound on the ball depth at this cap, and enlarging the cap never
/// increases it.
pub fn ball_depth(x: &[f64], sample: &WeightedSample, radius_cap: f64) -> Result<DepthValue> {
    check_dim(sample.dim(), x.len())?;
    check_finite(x)?;
    if !radius_cap.is_finite() || radius_cap <= 0.0 {
        return Err(Error::Parameter(format!("radius cap must be positive, got {radius_cap}")));
    }
    let family = DepthFamily::BallComplements { radius_cap };
    let scale = sample.points().iter().map(|p| dist(p, x)).fold(sample.diameter(), f64::max);
    if scale == 0.0 {
        return Ok(DepthValue::new(Mass::FULL, family, false));
    }
    let gap = 1e-12 * scale;

    let tangent = maybe_par_iter!(directions(x, sample))
        .map(|u| tangent_ball(x, sample, &u, radius_cap, gap))
        .max()
        .flatten()
        .unwrap_or(Mass::ZERO);

    let n = sample.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let through_pairs = maybe_par_iter!(pairs)
        .map(|(i, j)| {
            let (p, q) = (sample.point(i), sample.point(j));
            let center: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
            let radius = 0.5 * dist(p, q) * (1.0 + 1e-12);
            small_ball(x, sample, center, radius, radius_cap)
        })
        .max()
        .flatten()
        .unwrap_or(Mass::ZERO);

    let through_triples = if sample.dim() == 2 && n <= TRIPLE_MAX_POINTS {
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k)))).collect();
        maybe_par_iter!(triples)
            .map(|(i, j, k)| {
                let (center, radius) = circumcircle(sample.point(i), sample.point(j), sample.point(k))?;
                small_ball(x, sample, center, radius * (1.0 + 1e-12), radius_cap)
            })
            .max()
            .flatten()
            .unwrap_or(Mass::ZERO)
    } else {
        Mass::ZERO
    };

    let best = tangent.max(through_pairs).max(through_triples);
    Ok(DepthValue::new(Mass::FULL - best, family, false))
}

fn small_ball(x: &[f64], sample: &WeightedSample, center: Vec<f64>, radius: f64, cap: f64) -> Option<Mass> {
    if radius > cap {
        return None;
    }
    Ball { center, radius }.mass_excluding(x, sample)
}

/// Ball of radius `cap` lying in `{u . (p - x) >= gap}` and touching that
/// hyperplane beside the mean of the atoms on the far side.
fn tangent_ball(x: &[f64], sample: &WeightedSample, u: &[f64], cap: f64, gap: f64) -> Option<Mass> {
    let d = x.len();
    let mut mean = vec![0.0; d];
    let mut count = 0usize;
    for p in sample.points() {
        let h: f64 = p.iter().zip(x).zip(u).map(|((a, b), c)| (a - b) * c).sum();
        if h > 0.0 {
            for k in 0..d {
                mean[k] += p[k] - x[k];
            }
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    let along: f64 = mean.iter().zip(u).map(|(m, c)| m * c).sum::<f64>() / count as f64;
    let center: Vec<f64> = (0..d).map(|k| x[k] + mean[k] / count as f64 - along * u[k] + (cap + gap) * u[k]).collect();
    Ball { center, radius: cap }.mass_excluding(x, sample)
}

/// Unit directions to try for tangent balls.
///
/// In the plane these are interior points of every arc between consecutive
/// normals `+-perp(p - x)`; elsewhere normalized offsets, their differences
/// and the coordinate axes.
fn directions(x: &[f64], sample: &WeightedSample) -> Vec<Vec<f64>> {
    let offs: Vec<Vec<f64>> = sample
        .points()
        .iter()
        .map(|p| p.iter().zip(x).map(|(a, b)| a - b).collect::<Vec<f64>>())
        .filter(|v: &Vec<f64>| v.iter().any(|&c| c != 0.0))
        .collect();
    if x.len() == 2 {
        let mut angles: Vec<f64> = offs
            .iter()
            .flat_map(|v| {
                let t = v[1].atan2(v[0]);
                [(t + 0.25 * TAU).rem_euclid(TAU), (t - 0.25 * TAU).rem_euclid(TAU)]
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        let mut dirs = Vec::with_capacity(3 * angles.len() + 1);
        for (i, &a) in angles.iter().enumerate() {
            let b = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + TAU };
            for f in [0.25, 0.5, 0.75] {
                let t = a + f * (b - a);
                dirs.push(vec![t.cos(), t.sin()]);
            }
        }
        return dirs;
    }
    let unit = |v: Vec<f64>| {
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        (n > 0.0).then(|| v.iter().map(|c| c / n).collect::<Vec<f64>>())
    };
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for (i, v) in offs.iter().enumerate() {
        dirs.extend(unit(v.clone()));
        dirs.extend(unit(v.iter().map(|c| -c).collect()));
        for w in &offs[i + 1..] {
            dirs.extend(unit(v.iter().zip(w).map(|(a, b)| a - b).collect()));
            dirs.extend(unit(v.iter().zip(w).map(|(a, b)| b - a).collect()));
        }
    }
    for k in 0..x.len() {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; x.len()];
            e[k] = s;
            dirs.push(e);
        }
    }
    dirs
}

fn circumcircle(a: &[f64], b: &[f64], c: &[f64]) -> Option<(Vec<f64>, f64)> {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let det = 2.0 * (bx * cy - by * cx);
    if det == 0.0 {
        return None;
    }
    let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
    let ux = (cy * b2 - by * c2) / det;
    let uy = (bx * c2 - cx * b2) / det;
    let center = vec![a[0] + ux, a[1] + uy];
    let radius = [a, b, c].iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    Some((center, radius))
}
