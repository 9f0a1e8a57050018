//! Exact probability masses.
//!
//! Sample weights are quantized once, at construction, into integer units of
//! `1 / TOTAL_UNITS`. Every set query then sums integers, so two algorithms
//! that select the same mass agree bit for bit, and statements such as
//! "depth is at least 1/(d+1)" can be checked without rounding.
//!
//! `TOTAL_UNITS` is `lcm(1..=16) * 2^40`, so uniform weights over up to 16
//! atoms (and all dyadic weights down to 2^-40) are represented exactly.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const TOTAL_UNITS: u64 = 720_720 << 40;

/// A probability mass stored as an integer number of units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mass(u64);

impl Mass {
    pub const ZERO: Mass = Mass(0);
    pub const FULL: Mass = Mass(TOTAL_UNITS);

    pub const fn from_units(units: u64) -> Self {
        Mass(units)
    }

    pub const fn units(self) -> u64 {
        self.0
    }

    /// Nearest `f64` to `units / TOTAL_UNITS`. Monotone in the mass.
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TOTAL_UNITS as f64
    }

    pub fn complement(self) -> Mass {
        Mass(TOTAL_UNITS - self.0)
    }

    /// `P >= alpha`, compared through the monotone `f64` image of the mass.
    ///
    /// All thresholds in the crate go through this one comparison, so a
    /// reported depth fed back as `alpha` selects exactly the same sets.
    pub fn meets(self, alpha: f64) -> bool {
        self.to_f64() >= alpha
    }

    /// Smallest mass that meets `alpha` (`FULL` when none below it does).
    ///
    /// Distinct masses can share an `f64` image, so exact thresholds passed
    /// around as `alpha` are recovered through this.
    pub fn least_meeting(alpha: f64) -> Mass {
        let (mut lo, mut hi) = (0u64, TOTAL_UNITS);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if Mass(mid).meets(alpha) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Mass(lo)
    }

    /// `P(V) > 1 - alpha`, evaluated as "the complement of V does not meet alpha".
    pub fn exceeds_complement_of(self, alpha: f64) -> bool {
        !self.complement().meets(alpha)
    }

    /// Exact test of `self >= 1/k`.
    pub fn at_least_reciprocal(self, k: u64) -> bool {
        (self.0 as u128) * (k as u128) >= TOTAL_UNITS as u128
    }

    /// Exact test of `self == 1/k`.
    pub fn equals_reciprocal(self, k: u64) -> bool {
        (self.0 as u128) * (k as u128) == TOTAL_UNITS as u128
    }

    /// Exact test of `self > 1/2`.
    pub fn more_than_half(self) -> bool {
        self.0 > TOTAL_UNITS / 2
    }
}

impl Add for Mass {
    type Output = Mass;
    fn add(self, rhs: Mass) -> Mass {
        Mass(self.0 + rhs.0)
    }
}

impl AddAssign for Mass {
    fn add_assign(&mut self, rhs: Mass) {
        self.0 += rhs.0;
    }
}

impl Sub for Mass {
    type Output = Mass;
    fn sub(self, rhs: Mass) -> Mass {
        Mass(self.0 - rhs.0)
    }
}

impl Sum for Mass {
    fn sum<I: Iterator<Item = Mass>>(iter: I) -> Mass {
        iter.fold(Mass::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Mass> for Mass {
    fn sum<I: Iterator<Item = &'a Mass>>(iter: I) -> Mass {
        iter.copied().sum()
    }
}

/// Quantize positive finite weights into masses summing to exactly one.
///
/// Uses exact rational arithmetic and largest-remainder rounding with ties
/// broken by index, so the result depends only on the input weights.
pub(crate) fn quantize(weights: &[f64]) -> Result<Vec<Mass>> {
    if weights.is_empty() {
        return Err(Error::Parameter("no weights".into()));
    }
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::Parameter(format!("weight {i} must be positive and finite, got {w}")));
        }
    }
    let exact: Vec<BigRational> = weights.iter().map(|&w| BigRational::from_float(w).expect("finite weight")).collect();
    let total: BigRational = exact.iter().fold(BigRational::zero(), |acc, w| acc + w);
    let scale = BigRational::from_integer(BigInt::from(TOTAL_UNITS));

    let mut units = Vec::with_capacity(weights.len());
    let mut remainders = Vec::with_capacity(weights.len());
    for w in &exact {
        let scaled = w * &scale / &total;
        let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
        units.push(q.to_u64().expect("bounded by total"));
        remainders.push(BigRational::new(r, scaled.denom().clone()));
    }

    let assigned: u64 = units.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));
    for &i in order.iter().take((TOTAL_UNITS - assigned) as usize) {
        units[i] += 1;
    }

    // Every atom keeps at least one unit; borrow from the heaviest atom.
    for i in 0..units.len() {
        if units[i] == 0 {
            let heaviest = (0..units.len()).max_by(|&a, &b| units[a].cmp(&units[b]).then(b.cmp(&a))).expect("nonempty");
            units[heaviest] -= 1;
            units[i] = 1;
        }
    }
    Ok(units.into_iter().map(Mass).collect())
}
