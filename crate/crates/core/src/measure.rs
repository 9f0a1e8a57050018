//! Finitely supported probability measures and their set evaluations.

use std::cmp::Ordering;

use crate::error::{check_dim, Error, Result};
use crate::exact::{dot_cmp, Dyadic};
use crate::mass::{quantize, Mass};
use crate::order::OrderInterval;

/// A probability measure with finitely many weighted atoms in `R^d`.
///
/// Weights are normalized at construction. Duplicate points are allowed and
/// their masses add under every set query.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    dim: usize,
    points: Vec<Vec<f64>>,
    masses: Vec<Mass>,
    normalized: bool,
}

impl WeightedSample {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("a sample needs at least one point".into()));
        }
        if weights.len() != points.len() {
            return Err(Error::Dimension { expected: points.len(), found: weights.len() });
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::Parameter("points must have at least one coordinate".into()));
        }
        for (i, p) in points.iter().enumerate() {
            check_dim(dim, p.len())?;
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parameter(format!("point {i} has a non-finite coordinate")));
            }
        }
        let masses = quantize(&weights)?;
        let raw_total: f64 = weights.iter().sum();
        Ok(WeightedSample { dim, points, masses, normalized: (raw_total - 1.0).abs() > 1e-12 })
    }

    /// Equal weights on every point.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn masses(&self) -> &[Mass] {
        &self.masses
    }

    pub fn mass(&self, i: usize) -> Mass {
        self.masses[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.masses[i].to_f64()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.masses.iter().map(|m| m.to_f64()).collect()
    }

    /// True when the raw weights did not already sum to one.
    pub fn was_normalized(&self) -> bool {
        self.normalized
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], Mass)> + '_ {
        self.points.iter().map(Vec::as_slice).zip(self.masses.iter().copied())
    }

    /// Total mass of the atoms satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&[f64]) -> bool) -> Mass {
        self.iter().filter(|(p, _)| pred(p)).map(|(_, m)| m).sum()
    }

    /// Mass of the atoms located exactly at `x`.
    pub fn mass_at(&self, x: &[f64]) -> Mass {
        self.mass_where(|p| p == x)
    }

    /// Push every atom through `f`, keeping its mass.
    pub fn map_points(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let points: Vec<Vec<f64>> = self.points.iter().map(|p| f(p)).collect();
        let dim = points[0].len();
        for (i, p) in points.iter().enumerate() {
            check_dim(dim, p.len())?;
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parameter(format!("mapped point {i} is not finite")));
            }
        }
        Ok(WeightedSample { dim, points, masses: self.masses.clone(), normalized: self.normalized })
    }

    /// Values of a scalar function at the atoms, paired with their masses.
    pub fn project(&self, f: impl Fn(&[f64]) -> f64) -> Vec<(f64, Mass)> {
        self.iter().map(|(p, m)| (f(p), m)).collect()
    }

    /// Coordinate-wise bounding box.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.points[0].clone();
        let mut hi = self.points[0].clone();
        for p in &self.points {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Largest pairwise Euclidean distance.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.max(dist(p, q));
            }
        }
        best
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A closed `{x : u.x <= c}` or open `{x : u.x < c}` affine halfspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: Vec<f64>,
    offset: f64,
    closed: bool,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64, closed: bool) -> Result<Self> {
        if normal.iter().chain(std::iter::once(&offset)).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("halfspace coefficients must be finite".into()));
        }
        if normal.iter().all(|&v| v == 0.0) {
            return Err(Error::DegenerateInput("halfspace normal is zero".into()));
        }
        Ok(Halfspace { normal, offset, closed })
    }

    pub fn closed(normal: Vec<f64>, offset: f64) -> Result<Self> {
        Self::new(normal, offset, true)
    }

    pub fn open(normal: Vec<f64>, offset: f64) -> Result<Self> {
        Self::new(normal, offset, false)
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Exact membership; atoms on the boundary belong to closed halfspaces only.
    pub fn contains(&self, x: &[f64]) -> bool {
        match dot_cmp(&self.normal, x, self.offset) {
            Ordering::Less => true,
            Ordering::Equal => self.closed,
            Ordering::Greater => false,
        }
    }

    /// The set-theoretic complement, with the opposite closedness.
    pub fn complement(&self) -> Halfspace {
        Halfspace { normal: self.normal.iter().map(|v| -v).collect(), offset: -self.offset, closed: !self.closed }
    }

    /// The same set with a unit normal (up to rounding).
    pub fn canonical(&self) -> Halfspace {
        let norm = self.normal.iter().map(|v| v * v).sum::<f64>().sqrt();
        Halfspace {
            normal: self.normal.iter().map(|v| v / norm).collect(),
            offset: self.offset / norm,
            closed: self.closed,
        }
    }
}

pub fn mass_halfspace(sample: &WeightedSample, h: &Halfspace) -> Result<Mass> {
    check_dim(sample.dim(), h.dim())?;
    Ok(sample.mass_where(|p| h.contains(p)))
}

/// `P(H)` for a closed or open halfspace.
pub fn prob_halfspace(sample: &WeightedSample, h: &Halfspace) -> Result<f64> {
    mass_halfspace(sample, h).map(Mass::to_f64)
}

pub fn mass_interval(sample: &WeightedSample, j: &OrderInterval) -> Result<Mass> {
    check_dim(sample.dim(), j.dim())?;
    Ok(sample.mass_where(|p| j.contains(p)))
}

/// `P(J)` for an order interval.
pub fn prob_interval(sample: &WeightedSample, j: &OrderInterval) -> Result<f64> {
    mass_interval(sample, j).map(Mass::to_f64)
}

pub fn mass_ball(sample: &WeightedSample, center: &[f64], radius: f64) -> Result<Mass> {
    check_dim(sample.dim(), center.len())?;
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::DegenerateInput(format!("ball radius must be a nonnegative number, got {radius}")));
    }
    let r = Dyadic::from_f64(radius);
    let r2 = &r * &r;
    let c: Vec<Dyadic> = center.iter().map(|&v| Dyadic::from_f64(v)).collect();
    Ok(sample.mass_where(|p| {
        let d2 = p.iter().zip(&c).fold(Dyadic::zero(), |acc, (&x, cx)| {
            let d = &Dyadic::from_f64(x) - cx;
            &acc + &(&d * &d)
        });
        d2.cmp_exact(&r2) != Ordering::Greater
    }))
}

/// `P(B)` for the closed Euclidean ball of the given radius.
pub fn prob_ball(sample: &WeightedSample, center: &[f64], radius: f64) -> Result<f64> {
    mass_ball(sample, center, radius).map(Mass::to_f64)
}

/// The smallest alpha-quantile and the largest (1 - alpha)-quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantilePair {
    pub q_lo: f64,
    pub q_hi: f64,
    pub alpha: f64,
}

impl QuantilePair {
    pub fn is_empty(&self) -> bool {
        self.q_lo > self.q_hi
    }

    pub fn contains(&self, t: f64) -> bool {
        self.q_lo <= t && t <= self.q_hi
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Quantile pair of a weighted list of reals.
///
/// `q_lo = inf{t : P(X <= t) >= alpha}` and `q_hi = sup{t : P(X >= t) >= alpha}`,
/// evaluated exactly on the support.
pub fn quantiles(values: &[f64], weights: &[f64], alpha: f64) -> Result<QuantilePair> {
    check_alpha(alpha)?;
    if values.len() != weights.len() {
        return Err(Error::Dimension { expected: values.len(), found: weights.len() });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("quantile values must be finite".into()));
    }
    let masses = quantize(weights)?;
    let pairs: Vec<(f64, Mass)> = values.iter().copied().zip(masses).collect();
    Ok(quantiles_of(&pairs, alpha))
}

/// Quantile pair of already-quantized `(value, mass)` atoms summing to one.
pub(crate) fn quantiles_of(atoms: &[(f64, Mass)], alpha: f64) -> QuantilePair {
    QuantilePair { alpha, ..quantiles_at(atoms, Mass::least_meeting(alpha)) }
}

/// Quantile pair for the exact level `P(X <= q_lo) >= level`, `P(X >= q_hi) >= level`.
pub(crate) fn quantiles_at(atoms: &[(f64, Mass)], level: Mass) -> QuantilePair {
    let mut sorted: Vec<(f64, Mass)> = atoms.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    // collapse ties
    let mut support: Vec<(f64, Mass)> = Vec::with_capacity(sorted.len());
    for (v, m) in sorted {
        match support.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => support.push((v, m)),
        }
    }
    let mut cum = Mass::ZERO;
    let mut q_lo = f64::INFINITY;
    for &(v, m) in &support {
        cum += m;
        if cum >= level {
            q_lo = v;
            break;
        }
    }
    let mut tail = Mass::ZERO;
    let mut q_hi = f64::NEG_INFINITY;
    for &(v, m) in support.iter().rev() {
        tail += m;
        if tail >= level {
            q_hi = v;
            break;
        }
    }
    QuantilePair { q_lo, q_hi, alpha: level.to_f64() }
}
