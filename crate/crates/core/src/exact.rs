//! Exact arithmetic on `f64` inputs.
//!
//! Every finite `f64` is a dyadic rational `m * 2^e`. Sums, differences and
//! products of dyadics are dyadic, so the sign predicates used by the depth
//! sweeps and the region clipper can be decided exactly with big-integer
//! mantissas. Each predicate first tries a floating-point evaluation with a
//! conservative error bound and only falls back to big integers when the
//! sign is in doubt.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Float, ToPrimitive, Zero};

const EPS: f64 = f64::EPSILON;

/// An exact value `mant * 2^exp`.
#[derive(Debug, Clone)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "exact arithmetic requires finite input, got {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let (mant, exp, sign) = x.integer_decode();
        let tz = mant.trailing_zeros();
        let mant = BigInt::from(mant >> tz);
        Dyadic { mant: if sign < 0 { -mant } else { mant }, exp: exp as i64 + tz as i64 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic { mant: BigInt::from(v), exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Multiply by `2^k`.
    pub fn scale2(&self, k: i64) -> Self {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits > 62 {
            let shift = bits - 62;
            (&self.mant >> (shift as usize), self.exp + shift)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().expect("62-bit mantissa"), e)
    }

    pub fn cmp_exact(&self, other: &Dyadic) -> Ordering {
        (self - other).signum()
    }

    pub fn eq_exact(&self, other: &Dyadic) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let am = if a.exp > e { &a.mant << ((a.exp - e) as usize) } else { a.mant.clone() };
        let bm = if b.exp > e { &b.mant << ((b.exp - e) as usize) } else { b.mant.clone() };
        (am, bm, e)
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic { mant: a + b, exp: e }
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return -rhs;
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic { mant: a - b, exp: e }
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

/// Sign of an approximate value, if the error bound settles it.
pub(crate) fn settle(approx: f64, magnitude: f64, terms: usize) -> Option<Ordering> {
    if !approx.is_finite() || !magnitude.is_finite() || magnitude < 1e-250 {
        return None;
    }
    let bound = 16.0 * (terms as f64 + 2.0) * EPS * magnitude;
    if approx > bound {
        Some(Ordering::Greater)
    } else if approx < -bound {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// An exact vector carrying a floating-point shadow for filtered predicates.
#[derive(Debug, Clone)]
pub struct ExactVec {
    exact: Vec<Dyadic>,
    approx: Vec<f64>,
}

impl ExactVec {
    pub fn from_dyadics(exact: Vec<Dyadic>) -> Self {
        let approx = exact.iter().map(Dyadic::to_f64).collect();
        ExactVec { exact, approx }
    }

    pub fn from_f64(v: &[f64]) -> Self {
        ExactVec { exact: v.iter().map(|&x| Dyadic::from_f64(x)).collect(), approx: v.to_vec() }
    }

    /// `a - b`, exactly.
    pub fn diff(a: &[f64], b: &[f64]) -> Self {
        let exact: Vec<Dyadic> = a.iter().zip(b).map(|(&x, &y)| &Dyadic::from_f64(x) - &Dyadic::from_f64(y)).collect();
        Self::from_dyadics(exact)
    }

    pub fn dim(&self) -> usize {
        self.exact.len()
    }

    pub fn exact(&self) -> &[Dyadic] {
        &self.exact
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn is_zero(&self) -> bool {
        self.exact.iter().all(Dyadic::is_zero)
    }

    pub fn neg(&self) -> Self {
        ExactVec { exact: self.exact.iter().map(|x| -x).collect(), approx: self.approx.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &Dyadic) -> Self {
        Self::from_dyadics(self.exact.iter().map(|x| x * k).collect())
    }

    pub fn sub(&self, other: &ExactVec) -> Self {
        Self::from_dyadics(self.exact.iter().zip(&other.exact).map(|(a, b)| a - b).collect())
    }

    pub fn dot_exact(&self, other: &ExactVec) -> Dyadic {
        self.exact.iter().zip(&other.exact).fold(Dyadic::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Rotate a 2-vector by +90 degrees.
    pub fn perp(&self) -> Self {
        debug_assert_eq!(self.dim(), 2);
        ExactVec { exact: vec![-&self.exact[1], self.exact[0].clone()], approx: vec![-self.approx[1], self.approx[0]] }
    }

    pub fn eq_exact(&self, other: &ExactVec) -> bool {
        self.exact.iter().zip(&other.exact).all(|(a, b)| a.eq_exact(b))
    }
}

/// Sign of `a . b`.
pub fn sign_dot(a: &ExactVec, b: &ExactVec) -> Ordering {
    let mut s = 0.0;
    let mut mag = 0.0;
    for (x, y) in a.approx.iter().zip(&b.approx) {
        s += x * y;
        mag += (x * y).abs();
    }
    settle(s, mag, a.dim()).unwrap_or_else(|| a.dot_exact(b).signum())
}

/// Sign of the 2-D cross product `a0 b1 - a1 b0`.
pub fn sign_cross2(a: &ExactVec, b: &ExactVec) -> Ordering {
    let (p, q) = (a.approx[0] * b.approx[1], a.approx[1] * b.approx[0]);
    settle(p - q, p.abs() + q.abs(), 2).unwrap_or_else(|| {
        let e = &(&a.exact[0] * &b.exact[1]) - &(&a.exact[1] * &b.exact[0]);
        e.signum()
    })
}

/// Exact 3-D cross product.
pub fn cross3(a: &ExactVec, b: &ExactVec) -> ExactVec {
    let (a, b) = (&a.exact, &b.exact);
    ExactVec::from_dyadics(vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ])
}

/// Sign of `u . x - c` for plain `f64` data.
pub fn dot_cmp(u: &[f64], x: &[f64], c: f64) -> Ordering {
    let mut s = -c;
    let mut mag = c.abs();
    for (a, b) in u.iter().zip(x) {
        s += a * b;
        mag += (a * b).abs();
    }
    settle(s, mag, u.len() + 1).unwrap_or_else(|| {
        let dot =
            u.iter().zip(x).fold(Dyadic::zero(), |acc, (&a, &b)| &acc + &(&Dyadic::from_f64(a) * &Dyadic::from_f64(b)));
        (&dot - &Dyadic::from_f64(c)).signum()
    })
}

/// Compare two projections given exactly, using their shadows first.
pub fn cmp_filtered(a: &Dyadic, a_approx: f64, b: &Dyadic, b_approx: f64) -> Ordering {
    settle(a_approx - b_approx, a_approx.abs() + b_approx.abs(), 4).unwrap_or_else(|| a.cmp_exact(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_roundtrip() {
        for &x in &[0.0, 1.0, -2.5, 1e-300, 3.0e200, 0.1, -7.0 / 3.0] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn dyadic_arithmetic_is_exact() {
        // 0.1 + 0.2 - 0.3 is not zero in f64 arithmetic, and not zero exactly either,
        // but (a + b) - b must be exactly a.
        let a = Dyadic::from_f64(0.1);
        let b = Dyadic::from_f64(1e20);
        let s = &a + &b;
        assert!((&s - &b).eq_exact(&a));
        let p = &Dyadic::from_f64(3.0) * &Dyadic::from_f64(0.5);
        assert_eq!(p.to_f64(), 1.5);
    }

    #[test]
    fn near_degenerate_cross_is_decided_exactly() {
        // Nearly parallel vectors whose float cross product cancels.
        let a = ExactVec::from_f64(&[1.0 + EPS, 1.0]);
        let b = ExactVec::from_f64(&[1.0, 1.0 - EPS / 2.0]);
        // (1+e)(1-e/2) - 1 = e/2 - e^2/2 > 0
        assert_eq!(sign_cross2(&a, &b), Ordering::Greater);
        let c = ExactVec::from_f64(&[3.0, 6.0]);
        let d = ExactVec::from_f64(&[0.5, 1.0]);
        assert_eq!(sign_cross2(&c, &d), Ordering::Equal);
    }

    #[test]
    fn dot_cmp_handles_ties() {
        assert_eq!(dot_cmp(&[0.1, 0.2], &[1.0, 1.0], 0.1 + 0.2), {
            // exact 0.1 + 0.2 (as dyadics) vs the rounded f64 sum
            let exact = &Dyadic::from_f64(0.1) + &Dyadic::from_f64(0.2);
            exact.cmp_exact(&Dyadic::from_f64(0.1 + 0.2))
        });
        assert_eq!(dot_cmp(&[0.0, 1.0], &[5.0, 0.0], 0.0), Ordering::Equal);
    }

    #[test]
    fn cross3_matches_determinant_sign() {
        let a = ExactVec::from_f64(&[1.0, 0.0, 0.0]);
        let b = ExactVec::from_f64(&[0.0, 1.0, 0.0]);
        let c = cross3(&a, &b);
        assert_eq!(c.approx(), &[0.0, 0.0, 1.0]);
        assert_eq!(sign_dot(&c, &ExactVec::from_f64(&[0.3, -2.0, 1e-30])), Ordering::Greater);
    }
}
