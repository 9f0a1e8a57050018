//! Simplicial cone orders, order intervals and order medians.
//!
//! A cone `K = G * R^d_+` with nonsingular generator matrix `G` induces the
//! partial order `x <= y  <=>  y - x in K`. In cone coordinates `T x` with
//! `T = G^-1` the order is coordinate-wise, so least upper bounds, greatest
//! lower bounds and intervals all reduce to per-coordinate operations.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::mass::Mass;
use crate::measure::{quantiles_of, WeightedSample};

/// Largest sample accepted by [`ConeOrder::median_set_oracle`].
pub const MEDIAN_ORACLE_MAX_POINTS: usize = 30;

#[derive(Debug, Clone)]
pub struct ConeOrder {
    generators: DMatrix<f64>,
    cone_map: DMatrix<f64>,
    identity: bool,
}

impl PartialEq for ConeOrder {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl ConeOrder {
    /// The coordinate-wise order on `R^d`.
    pub fn identity(dim: usize) -> Self {
        let eye = DMatrix::identity(dim, dim);
        ConeOrder { generators: eye.clone(), cone_map: eye, identity: true }
    }

    /// Order whose cone is spanned by the columns of `rows` (given row by row).
    pub fn from_generators(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Parameter("generator matrix is empty".into()));
        }
        let mut flat = Vec::with_capacity(d * d);
        for row in rows {
            check_dim(d, row.len())?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parameter("generator entries must be finite".into()));
            }
            flat.extend_from_slice(row);
        }
        let generators = DMatrix::from_row_slice(d, d, &flat);
        let scale = flat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let det = generators.determinant();
        if scale == 0.0 || det.abs() <= 1e-9 * scale.powi(d as i32) {
            return Err(Error::DegenerateInput(format!("cone generators are singular (det = {det:e})")));
        }
        let cone_map = generators
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateInput("cone generators are not invertible".into()))?;
        let identity = generators == DMatrix::identity(d, d);
        Ok(ConeOrder { generators, cone_map, identity })
    }

    /// The coordinate-wise order rotated counterclockwise by `angle` radians.
    pub fn rotation(angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        Self::from_generators(&[vec![c, -s], vec![s, c]])
    }

    pub fn dim(&self) -> usize {
        self.generators.nrows()
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Generator matrix, row by row.
    pub fn generator_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.generators.row(i).iter().copied().collect()).collect()
    }

    pub fn determinant(&self) -> f64 {
        self.generators.determinant()
    }

    /// `T x`.
    pub fn cone_coords(&self, x: &[f64]) -> Vec<f64> {
        if self.identity {
            return x.to_vec();
        }
        (&self.cone_map * DVector::from_column_slice(x)).iter().copied().collect()
    }

    /// `G c`, the ambient point with cone coordinates `c`.
    pub fn ambient(&self, c: &[f64]) -> Vec<f64> {
        if self.identity {
            return c.to_vec();
        }
        (&self.generators * DVector::from_column_slice(c)).iter().copied().collect()
    }

    /// `x <= y` in this order: every cone coordinate of `x` is at most that of `y`.
    ///
    /// Comparing transformed points (rather than transforming `y - x`) keeps
    /// the relation exactly transitive under rounding.
    pub fn leq(&self, x: &[f64], y: &[f64]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        let (tx, ty) = (self.cone_coords(x), self.cone_coords(y));
        Ok(tx.iter().zip(&ty).all(|(a, b)| a <= b))
    }

    /// Least upper bound and greatest lower bound of a finite point set.
    pub fn sup_inf(&self, pts: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (lo, hi) = self.cone_hull(pts)?;
        Ok((self.ambient(&hi), self.ambient(&lo)))
    }

    /// Coordinate-wise min and max of the cone coordinates of `pts`.
    pub(crate) fn cone_hull(&self, pts: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
        let first = pts.first().ok_or_else(|| Error::Parameter("supremum of an empty set".into()))?;
        check_dim(self.dim(), first.len())?;
        let mut lo = self.cone_coords(first);
        let mut hi = lo.clone();
        for p in &pts[1..] {
            check_dim(self.dim(), p.len())?;
            for (k, v) in self.cone_coords(p).into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        Ok((lo, hi))
    }

    /// Cone coordinates of every atom, with masses.
    pub(crate) fn transform_sample(&self, sample: &WeightedSample) -> Vec<(Vec<f64>, Mass)> {
        sample.iter().map(|(p, m)| (self.cone_coords(p), m)).collect()
    }

    /// The order median: intersection of all intervals of mass above 1/2.
    ///
    /// Computed as the product of coordinate median intervals in cone
    /// coordinates; always a nonempty compact interval.
    pub fn median_set(&self, sample: &WeightedSample) -> Result<OrderInterval> {
        check_dim(self.dim(), sample.dim())?;
        let coords = self.transform_sample(sample);
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let atoms: Vec<(f64, Mass)> = coords.iter().map(|(c, m)| (c[k], *m)).collect();
            let q = quantiles_of(&atoms, 0.5);
            lower.push(q.q_lo);
            upper.push(q.q_hi);
        }
        OrderInterval::new(self.clone(), lower, upper)
    }

    /// Brute-force order median for small samples.
    ///
    /// Enumerates every interval whose endpoint coordinates are support
    /// projections or infinite, keeps those of mass above 1/2 and returns the
    /// hull of their common intersection.
    pub fn median_set_oracle(&self, sample: &WeightedSample) -> Result<OrderInterval> {
        check_dim(self.dim(), sample.dim())?;
        if sample.len() > MEDIAN_ORACLE_MAX_POINTS {
            return Err(Error::Parameter(format!(
                "median oracle accepts at most {MEDIAN_ORACLE_MAX_POINTS} points, got {}",
                sample.len()
            )));
        }
        let d = self.dim();
        let coords = self.transform_sample(sample);
        let mut values: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let mut v: Vec<f64> = coords.iter().map(|(c, _)| c[k]).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            })
            .collect();
        for v in &mut values {
            v.insert(0, f64::NEG_INFINITY);
            v.push(f64::INFINITY);
        }

        let mut lower = vec![f64::NEG_INFINITY; d];
        let mut upper = vec![f64::INFINITY; d];
        let all: Vec<usize> = (0..coords.len()).collect();
        let mut lo_cur = vec![0.0; d];
        let mut hi_cur = vec![0.0; d];
        enumerate_boxes(0, &values, &coords, &all, &mut lo_cur, &mut hi_cur, &mut lower, &mut upper);
        OrderInterval::new(self.clone(), lower, upper)
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_boxes(
    k: usize,
    values: &[Vec<f64>],
    coords: &[(Vec<f64>, Mass)],
    inside: &[usize],
    lo_cur: &mut [f64],
    hi_cur: &mut [f64],
    lower: &mut [f64],
    upper: &mut [f64],
) {
    if k == values.len() {
        let mass: Mass = inside.iter().map(|&i| coords[i].1).sum();
        if mass.exceeds_complement_of(0.5) {
            for j in 0..k {
                lower[j] = lower[j].max(lo_cur[j]);
                upper[j] = upper[j].min(hi_cur[j]);
            }
        }
        return;
    }
    let vals = &values[k];
    // lower endpoint: -inf or a support value; upper: a support value or +inf
    for (a_idx, &a) in vals[..vals.len() - 1].iter().enumerate() {
        for &b in &vals[a_idx.max(1)..] {
            if a > b {
                continue;
            }
            let next: Vec<usize> =
                inside.iter().copied().filter(|&i| a <= coords[i].0[k] && coords[i].0[k] <= b).collect();
            lo_cur[k] = a;
            hi_cur[k] = b;
            enumerate_boxes(k + 1, values, coords, &next, lo_cur, hi_cur, lower, upper);
        }
    }
}

/// A generalized order interval `{x : lower <= T x <= upper}`.
///
/// Bounds live in cone coordinates; infinite entries drop the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderInterval {
    order: ConeOrder,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl OrderInterval {
    pub fn new(order: ConeOrder, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(order.dim(), lower.len())?;
        check_dim(order.dim(), upper.len())?;
        if lower.iter().any(|&v| v.is_nan() || v == f64::INFINITY)
            || upper.iter().any(|&v| v.is_nan() || v == f64::NEG_INFINITY)
        {
            return Err(Error::Parameter("interval bounds must be reals or outward infinities".into()));
        }
        Ok(OrderInterval { order, lower, upper })
    }

    /// The interval `[a, b]` between two ambient points.
    pub fn between(order: ConeOrder, a: &[f64], b: &[f64]) -> Result<Self> {
        check_dim(order.dim(), a.len())?;
        check_dim(order.dim(), b.len())?;
        let (lo, hi) = (order.cone_coords(a), order.cone_coords(b));
        Self::new(order, lo, hi)
    }

    /// The whole space.
    pub fn full(order: ConeOrder) -> Self {
        let d = order.dim();
        OrderInterval { order, lower: vec![f64::NEG_INFINITY; d], upper: vec![f64::INFINITY; d] }
    }

    pub fn order(&self) -> &ConeOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.dim()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_cone(&self.order.cone_coords(x))
    }

    pub fn contains_cone(&self, c: &[f64]) -> bool {
        c.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(lo, hi)| lo > hi)
    }

    pub fn is_compact(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(|v| v.is_finite())
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    /// Intersection with an interval of the same order.
    pub fn intersect(&self, other: &OrderInterval) -> Result<OrderInterval> {
        if self.order != other.order {
            return Err(Error::Parameter("intervals belong to different orders".into()));
        }
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| a.max(*b)).collect();
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| a.min(*b)).collect();
        Ok(OrderInterval { order: self.order.clone(), lower, upper })
    }

    /// Whether `other` is a subset of `self` (empty sets are subsets of everything).
    pub fn contains_interval(&self, other: &OrderInterval) -> bool {
        other.is_empty()
            || other
                .lower
                .iter()
                .zip(&other.upper)
                .zip(self.lower.iter().zip(&self.upper))
                .all(|((olo, ohi), (lo, hi))| lo <= olo && ohi <= hi)
    }

    /// `sup` of the lower endpoint and `inf` of the upper endpoint, in ambient coordinates.
    pub fn ambient_endpoints(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.is_compact().then(|| (self.order.ambient(&self.lower), self.order.ambient(&self.upper)))
    }

    /// All `2^d` corners in ambient coordinates (compact intervals only).
    pub fn corners(&self) -> Option<Vec<Vec<f64>>> {
        if !self.is_compact() || self.is_empty() {
            return None;
        }
        let d = self.dim();
        let corners = (0..1usize << d)
            .map(|mask| {
                let c: Vec<f64> =
                    (0..d).map(|k| if mask >> k & 1 == 1 { self.upper[k] } else { self.lower[k] }).collect();
                self.order.ambient(&c)
            })
            .collect();
        Some(corners)
    }
}
