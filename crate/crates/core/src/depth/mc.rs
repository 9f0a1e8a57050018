use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_finite, DepthFamily, DepthValue};
use crate::error::{check_dim, Error, Result};
use crate::exact::{sign_dot, ExactVec};
use crate::mass::Mass;
use crate::measure::WeightedSample;
#[allow(unused_imports)]
use crate::par::{maybe_par_iter, prelude::*};

/// Upper bound on halfspace depth from `trials` random directions.
///
/// Directions are Gaussian vectors drawn from a seeded ChaCha stream, so the
/// result depends only on the inputs. Membership signs are exact; the value
/// is flagged inexact because the minimizing direction may be missed.
pub fn monte_carlo_depth(x: &[f64], sample: &WeightedSample, trials: usize, seed: u64) -> Result<DepthValue> {
    check_dim(sample.dim(), x.len())?;
    check_finite(x)?;
    if trials == 0 {
        return Err(Error::Parameter("Monte Carlo depth needs at least one trial".into()));
    }
    let d = sample.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(trials);
    while dirs.len() < trials {
        let u: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        if u.iter().any(|&c| c != 0.0) {
            dirs.push(u);
        }
    }
    let offs: Vec<(ExactVec, Mass)> = sample.iter().map(|(p, m)| (ExactVec::diff(p, x), m)).collect();

    let best = maybe_par_iter!(dirs)
        .map(|u| {
            let u = ExactVec::from_f64(&u);
            let (mut le, mut ge) = (Mass::ZERO, Mass::ZERO);
            for (v, m) in &offs {
                match sign_dot(&u, v) {
                    Ordering::Less => le += *m,
                    Ordering::Greater => ge += *m,
                    Ordering::Equal => {
                        le += *m;
                        ge += *m;
                    }
                }
            }
            le.min(ge)
        })
        .min()
        .unwrap_or(Mass::FULL);
    Ok(DepthValue::new(best, DepthFamily::HalfspaceAll, false))
}
