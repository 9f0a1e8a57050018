//! Brute-force planar halfspace depth used to cross-check the sweep.
//!
//! Shares no geometry code with the sweep: coordinates are scaled to a
//! common power of two and handled as big integers, and every candidate
//! halfplane is evaluated directly.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{check_finite, DepthFamily, DepthValue};
use crate::error::{check_dim, Error, Result};
use crate::mass::Mass;
use crate::measure::WeightedSample;

/// Largest sample accepted by [`depth_oracle`].
pub const ORACLE_MAX_POINTS: usize = 30;

type V2 = [BigInt; 2];

fn decode(v: f64) -> (BigInt, i32) {
    if v == 0.0 {
        return (BigInt::zero(), i32::MAX);
    }
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mant);
    (if v < 0.0 { -m } else { m }, e)
}

/// Scale all coordinates by one power of two so that every value is an integer.
fn integerize(coords: &[f64]) -> Vec<BigInt> {
    let decoded: Vec<(BigInt, i32)> = coords.iter().map(|&v| decode(v)).collect();
    let base = decoded.iter().map(|d| d.1).min().unwrap_or(0).min(0);
    decoded.into_iter().map(|(m, e)| if m.is_zero() { m } else { m << ((e - base) as usize) }).collect()
}

fn dot(a: &V2, b: &V2) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn sub(a: &V2, b: &V2) -> V2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn perp(a: &V2) -> V2 {
    [-&a[1], a[0].clone()]
}

fn is_zero(a: &V2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

/// Minimum closed-halfplane mass over a finite family of normals through `x`.
///
/// Candidates: normals to every `p_i - x` and `p_i - p_j`, each also tilted
/// toward both of its tangent directions by an amount small enough to keep
/// every nonzero projection sign.
pub fn depth_oracle(x: &[f64], sample: &WeightedSample) -> Result<DepthValue> {
    check_dim(2, sample.dim())?;
    check_dim(2, x.len())?;
    check_finite(x)?;
    if sample.len() > ORACLE_MAX_POINTS {
        return Err(Error::Parameter(format!(
            "depth oracle accepts at most {ORACLE_MAX_POINTS} points, got {}",
            sample.len()
        )));
    }
    let mut flat: Vec<f64> = x.to_vec();
    for p in sample.points() {
        flat.extend_from_slice(p);
    }
    let ints = integerize(&flat);
    let xi: V2 = [ints[0].clone(), ints[1].clone()];
    let pts: Vec<V2> = ints[2..].chunks(2).map(|c| [c[0].clone(), c[1].clone()]).collect();
    let offs: Vec<V2> = pts.iter().map(|p| sub(p, &xi)).collect();
    let masses = sample.masses();

    let mut normals: Vec<V2> = Vec::new();
    for (i, v) in offs.iter().enumerate() {
        if !is_zero(v) {
            normals.push(perp(v));
        }
        for q in &pts[i + 1..] {
            let w = sub(q, &pts[i]);
            if !is_zero(&w) {
                normals.push(perp(&w));
            }
        }
    }
    if normals.is_empty() {
        normals.push([BigInt::from(1), BigInt::zero()]);
    }

    let mut candidates: Vec<V2> = Vec::with_capacity(normals.len() * 3);
    for n in &normals {
        let t = perp(n);
        let reach = offs.iter().map(|v| dot(&t, v).abs()).max().unwrap_or_else(BigInt::zero);
        let k = reach + 1;
        let big = [&n[0] * &k, &n[1] * &k];
        candidates.push([&big[0] + &t[0], &big[1] + &t[1]]);
        candidates.push([&big[0] - &t[0], &big[1] - &t[1]]);
        candidates.push(n.clone());
    }

    let mut best = Mass::FULL;
    for u in &candidates {
        let (mut le, mut ge) = (Mass::ZERO, Mass::ZERO);
        for (v, &m) in offs.iter().zip(masses) {
            let s = dot(u, v);
            if !s.is_positive() {
                le += m;
            }
            if !s.is_negative() {
                ge += m;
            }
        }
        best = best.min(le).min(ge);
    }
    Ok(DepthValue::new(best, DepthFamily::HalfspaceAll, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let triangle = WeightedSample::uniform(vec![vec![0.0, 1.0], vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(depth_oracle(&[0.0, 0.0], &triangle).unwrap().mass.equals_reciprocal(3));
        let one = WeightedSample::uniform(vec![vec![0.25, -3.0]]).unwrap();
        assert_eq!(depth_oracle(&[0.25, -3.0], &one).unwrap().value, 1.0);
    }

    #[test]
    fn collinear_sample_gives_smaller_tail() {
        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let s = WeightedSample::new(pts, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        // x = (1, 2): at-or-below mass 3/15, at-or-above mass 14/15
        let d = depth_oracle(&[1.0, 2.0], &s).unwrap();
        assert_eq!(d.mass, s.mass(0) + s.mass(1));
        // two atoms strictly to one side with an atom-free point between them
        let two = WeightedSample::uniform(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(depth_oracle(&[0.0, 0.0], &two).unwrap().mass, Mass::ZERO);
    }

    #[test]
    fn tiny_and_huge_coordinates() {
        let s = WeightedSample::uniform(vec![vec![1e-300, 0.0], vec![-1e-300, 0.0], vec![0.0, 1e300]]).unwrap();
        assert!(depth_oracle(&[0.0, 0.0], &s).unwrap().mass.equals_reciprocal(3));
    }

    #[test]
    fn budget() {
        let pts: Vec<Vec<f64>> = (0..31).map(|i| vec![i as f64, 0.0]).collect();
        let s = WeightedSample::uniform(pts).unwrap();
        assert!(matches!(depth_oracle(&[0.0, 0.0], &s), Err(Error::Parameter(_))));
    }
}
