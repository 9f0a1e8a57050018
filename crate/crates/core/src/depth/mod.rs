//! Type-D depth `D(x; P, U) = inf { P(U) : U in U, x in U }` for the
//! supported set families.
//!
//! Exact routines return masses as integer unit counts (see [`Mass`]), so
//! values produced by different algorithms can be compared for equality.

mod ball;
mod halfspace;
mod mc;
mod oracle;

pub use ball::ball_depth;
pub use halfspace::{
    axis_depth, halfspace_depth_2d, halfspace_depth_exact, halfspace_depth_open_2d, EXACT_MAX_DIM, EXACT_MAX_POINTS,
};
pub use mc::monte_carlo_depth;
pub use oracle::{depth_oracle, ORACLE_MAX_POINTS};

pub(crate) use halfspace::{angle_cmp, depth_of_offsets};

use crate::error::{check_dim, Error, Result};
use crate::mass::Mass;
use crate::measure::WeightedSample;
use crate::order::ConeOrder;
#[allow(unused_imports)]
use crate::par::{maybe_par_iter, prelude::*};

/// A set family `U` defining a depth function.
#[derive(Debug, Clone, PartialEq)]
pub enum DepthFamily {
    /// All closed halfspaces (Tukey depth).
    HalfspaceAll,
    /// Halfspaces bounded by coordinate hyperplanes of a cone order.
    AxisParallel(ConeOrder),
    /// Complements of order intervals; same depth as `AxisParallel`.
    IntervalComplements(ConeOrder),
    /// Complements of closed balls of radius at most `radius_cap`.
    BallComplements { radius_cap: f64 },
    /// Complements of compact convex sets; same depth as `HalfspaceAll`.
    ConvexCompactComplements,
}

impl DepthFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DepthFamily::HalfspaceAll => "halfspace",
            DepthFamily::AxisParallel(_) => "axis",
            DepthFamily::IntervalComplements(_) => "interval",
            DepthFamily::BallComplements { .. } => "ball",
            DepthFamily::ConvexCompactComplements => "convex",
        }
    }

    /// The cone order of an interval family.
    pub fn order(&self) -> Option<&ConeOrder> {
        match self {
            DepthFamily::AxisParallel(o) | DepthFamily::IntervalComplements(o) => Some(o),
            _ => None,
        }
    }

    /// Families whose depth is the halfspace depth.
    pub fn is_halfspace_equivalent(&self) -> bool {
        matches!(self, DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements)
    }
}

/// A depth value with its provenance.
///
/// `exact` values are sums of atom masses; inexact values are upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthValue {
    pub value: f64,
    pub mass: Mass,
    pub family: DepthFamily,
    pub exact: bool,
}

impl DepthValue {
    pub(crate) fn new(mass: Mass, family: DepthFamily, exact: bool) -> Self {
        DepthValue { value: mass.to_f64(), mass, family, exact }
    }
}

/// Depth of `x` with respect to `family`.
///
/// Halfspace-type families use the exact sweep in the plane and the exact
/// enumeration up to three dimensions.
pub fn depth(x: &[f64], sample: &WeightedSample, family: &DepthFamily) -> Result<DepthValue> {
    check_dim(sample.dim(), x.len())?;
    let value = match family {
        DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements => {
            if sample.dim() == 2 {
                halfspace_depth_2d(x, sample)?
            } else {
                halfspace_depth_exact(x, sample)?
            }
        }
        DepthFamily::AxisParallel(order) | DepthFamily::IntervalComplements(order) => axis_depth(x, sample, order)?,
        DepthFamily::BallComplements { radius_cap } => ball_depth(x, sample, *radius_cap)?,
    };
    Ok(DepthValue { family: family.clone(), ..value })
}

/// Depth of every query point; evaluated in parallel with the `parallel` feature.
pub fn depth_batch(queries: &[Vec<f64>], sample: &WeightedSample, family: &DepthFamily) -> Result<Vec<DepthValue>> {
    maybe_par_iter!(queries).map(|x| depth(x, sample, family)).collect()
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parameter("query point must be finite".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedSample {
        WeightedSample::uniform(vec![vec![0.0, 1.0], vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn dispatch_tags_the_family() {
        let s = triangle();
        let fam = DepthFamily::ConvexCompactComplements;
        let d = depth(&[0.0, 0.0], &s, &fam).unwrap();
        assert_eq!(d.family, fam);
        assert_eq!(d.value, 1.0 / 3.0);
        let axis = DepthFamily::AxisParallel(ConeOrder::identity(2));
        assert_eq!(depth(&[0.0, 0.0], &s, &axis).unwrap().value, 2.0 / 3.0);
    }

    #[test]
    fn rejects_bad_queries() {
        let s = triangle();
        assert!(depth(&[0.0], &s, &DepthFamily::HalfspaceAll).is_err());
        assert!(depth(&[f64::NAN, 0.0], &s, &DepthFamily::HalfspaceAll).is_err());
    }
}
