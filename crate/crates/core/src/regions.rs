//! Depth regions `S_alpha = {x : D(x) >= alpha}`, centers and the
//! `1/(d+1)` lower bound on the maximal halfspace depth.
//!
//! `S_alpha` is the intersection of the closed sets `V` (complements of the
//! family members) with `P(V) > 1 - alpha`. Interval families give a box in
//! cone coordinates. Planar halfspace regions are cut exactly from a finite
//! table of candidate directions: normals of differences of atoms, the
//! differences themselves and the coordinate axes.

use std::cmp::Ordering;

use crate::depth::{angle_cmp, depth, depth_of_offsets, DepthFamily};
use crate::error::{check_dim, Error, Result};
use crate::exact::{cmp_filtered, cross3, Dyadic, ExactVec};
use crate::mass::Mass;
use crate::measure::{check_alpha, quantiles_at, WeightedSample};
use crate::order::{ConeOrder, OrderInterval};
#[allow(unused_imports)]
use crate::par::{maybe_par_iter, prelude::*};
use crate::polygon::{ConvexPolygon, ExactPolygon, HPoint, Line};

/// Largest sample accepted by [`bound_check`] in three dimensions.
pub const BOUND_3D_MAX_POINTS: usize = 8;

/// A depth region or center.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionPolytope {
    Empty {
        dim: usize,
    },
    /// A compact order interval.
    Box(OrderInterval),
    /// A planar convex polygon (possibly a point or a segment).
    Polygon(ConvexPolygon),
    FullSpace {
        dim: usize,
    },
}

impl RegionPolytope {
    pub fn dim(&self) -> usize {
        match self {
            RegionPolytope::Empty { dim } | RegionPolytope::FullSpace { dim } => *dim,
            RegionPolytope::Box(b) => b.dim(),
            RegionPolytope::Polygon(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RegionPolytope::Empty { .. } => "empty",
            RegionPolytope::Box(_) => "box",
            RegionPolytope::Polygon(_) => "polygon",
            RegionPolytope::FullSpace { .. } => "full",
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, RegionPolytope::Empty { .. })
    }

    /// Membership, allowing boundary slack `tol` (cone coordinates for boxes).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            RegionPolytope::Empty { .. } => false,
            RegionPolytope::FullSpace { dim } => x.len() == *dim,
            RegionPolytope::Box(b) => {
                x.len() == b.dim()
                    && b.order()
                        .cone_coords(x)
                        .iter()
                        .zip(b.lower().iter().zip(b.upper()))
                        .all(|(c, (lo, hi))| lo - tol <= *c && *c <= hi + tol)
            }
            RegionPolytope::Polygon(p) => x.len() == 2 && p.contains([x[0], x[1]], tol),
        }
    }

    /// The region as a planar polygon (boxes become parallelograms).
    pub fn to_polygon(&self) -> Option<ConvexPolygon> {
        match self {
            RegionPolytope::Polygon(p) => Some(p.clone()),
            RegionPolytope::Box(b) if b.dim() == 2 => {
                let corners = b.corners()?;
                let pts: Vec<[f64; 2]> = corners.iter().map(|c| [c[0], c[1]]).collect();
                Some(ConvexPolygon::hull(&pts))
            }
            _ => None,
        }
    }

    /// Vertices of a planar region in canonical order.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        self.to_polygon().map(|p| p.vertices().to_vec()).unwrap_or_default()
    }

    /// Whether `other` lies inside `self` up to `tol` (planar regions and boxes).
    pub fn contains_region(&self, other: &RegionPolytope, tol: f64) -> bool {
        match (self, other) {
            (_, RegionPolytope::Empty { .. }) => true,
            (RegionPolytope::Empty { .. }, _) => false,
            (RegionPolytope::FullSpace { .. }, _) => true,
            (_, RegionPolytope::FullSpace { .. }) => false,
            (RegionPolytope::Box(a), RegionPolytope::Box(b)) if a.order() == b.order() => a.contains_interval(b),
            _ => match (self.to_polygon(), other.to_polygon()) {
                (Some(a), Some(b)) => a.contains_polygon(&b, tol),
                _ => false,
            },
        }
    }
}

/// `S_alpha` for complements of order intervals: a box of coordinate
/// quantile pairs in cone coordinates.
pub fn region_axis(order: &ConeOrder, sample: &WeightedSample, alpha: f64) -> Result<RegionPolytope> {
    check_alpha(alpha)?;
    region_axis_at(order, sample, Mass::least_meeting(alpha))
}

/// Interval-family region `{x : D(x) >= level}` for an exact mass level.
pub fn region_axis_at(order: &ConeOrder, sample: &WeightedSample, level: Mass) -> Result<RegionPolytope> {
    check_level(level)?;
    check_dim(order.dim(), sample.dim())?;
    let coords = order.transform_sample(sample);
    let mut lower = Vec::with_capacity(order.dim());
    let mut upper = Vec::with_capacity(order.dim());
    for k in 0..order.dim() {
        let atoms: Vec<(f64, Mass)> = coords.iter().map(|(c, m)| (c[k], *m)).collect();
        let q = quantiles_at(&atoms, level);
        if q.is_empty() {
            return Ok(RegionPolytope::Empty { dim: order.dim() });
        }
        lower.push(q.q_lo);
        upper.push(q.q_hi);
    }
    Ok(RegionPolytope::Box(OrderInterval::new(order.clone(), lower, upper)?))
}

/// Sorted distinct projections of the atoms on one direction.
struct Cuts {
    u: [Dyadic; 2],
    /// `(c, P(u . X > c))` with `c` increasing.
    levels: Vec<(Dyadic, Mass)>,
}

impl Cuts {
    fn new(u: &ExactVec, sample: &WeightedSample, points: &[ExactVec]) -> Self {
        let mut proj: Vec<(Dyadic, f64, Mass)> = points
            .iter()
            .zip(sample.masses())
            .map(|(p, &m)| {
                let c = u.dot_exact(p);
                let a = c.to_f64();
                (c, a, m)
            })
            .collect();
        proj.sort_by(|a, b| cmp_filtered(&a.0, a.1, &b.0, b.1));
        let mut levels: Vec<(Dyadic, f64, Mass)> = Vec::with_capacity(proj.len());
        for (c, a, m) in proj {
            match levels.last_mut() {
                Some(last) if cmp_filtered(&last.0, last.1, &c, a) == Ordering::Equal => last.2 += m,
                _ => levels.push((c, a, m)),
            }
        }
        // convert point masses to strict upper tails
        let mut tail = Mass::ZERO;
        let mut out: Vec<(Dyadic, Mass)> = Vec::with_capacity(levels.len());
        for (c, _, m) in levels.into_iter().rev() {
            out.push((c, tail));
            tail += m;
        }
        out.reverse();
        Cuts { u: [u.exact()[0].clone(), u.exact()[1].clone()], levels: out }
    }

    /// Tightest `c` with `P(u . X > c) < level`.
    fn offset(&self, level: Mass) -> &Dyadic {
        let k = self.levels.partition_point(|(_, tail)| *tail >= level);
        &self.levels[k].0
    }

    /// Masses of closed halfplanes `{u . X <= c}` and `{u . X >= c}` at atom levels.
    fn halfplane_masses(&self) -> impl Iterator<Item = Mass> + '_ {
        let mut above = Mass::FULL;
        self.levels.iter().flat_map(move |(_, tail)| {
            let ge = above;
            above = *tail;
            [tail.complement(), ge]
        })
    }
}

/// Candidate-direction table for planar halfspace regions of one sample.
struct HalfspaceTable {
    cuts: Vec<Cuts>,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl HalfspaceTable {
    fn new(sample: &WeightedSample) -> Self {
        let points: Vec<ExactVec> = sample.points().iter().map(|p| ExactVec::from_f64(p)).collect();
        let mut dirs: Vec<ExactVec> = Vec::new();
        for (i, p) in sample.points().iter().enumerate() {
            for q in &sample.points()[i + 1..] {
                let d = ExactVec::diff(q, p);
                if d.is_zero() {
                    continue;
                }
                let n = d.perp();
                dirs.push(n.neg());
                dirs.push(n);
                dirs.push(d.neg());
                dirs.push(d);
            }
        }
        for e in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            dirs.push(ExactVec::from_f64(&e));
        }
        dirs.sort_by(angle_cmp);
        dirs.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
        let cuts: Vec<Cuts> = maybe_par_iter!(dirs).map(|u| Cuts::new(&u, sample, &points)).collect();
        let (lo, hi) = sample.bounds();
        HalfspaceTable { cuts, lo: [lo[0] - 1.0, lo[1] - 1.0], hi: [hi[0] + 1.0, hi[1] + 1.0] }
    }

    /// `{x : D(x) >= level}`.
    fn region(&self, level: Mass) -> ExactPolygon {
        if level > Mass::FULL {
            return ExactPolygon::empty();
        }
        let mut poly = ExactPolygon::rect(self.lo, self.hi);
        for cut in &self.cuts {
            poly.clip(Line::new(cut.u.clone(), cut.offset(level).clone()));
            if poly.is_empty() {
                break;
            }
        }
        poly
    }

    /// Every closed-halfplane mass at an atom level, sorted and distinct.
    fn candidate_levels(&self) -> Vec<Mass> {
        let mut all: Vec<Mass> = self.cuts.iter().flat_map(Cuts::halfplane_masses).collect();
        all.push(Mass::FULL);
        all.retain(|m| *m > Mass::ZERO);
        all.sort();
        all.dedup();
        all
    }
}

fn check_planar(sample: &WeightedSample) -> Result<()> {
    check_dim(2, sample.dim())
}

/// Exact halfspace depth at a rational vertex.
fn vertex_depth(sample: &WeightedSample, v: &HPoint) -> Mass {
    let [x, y, w] = v.homogeneous();
    let offs: Vec<ExactVec> = sample
        .points()
        .iter()
        .map(|p| ExactVec::from_dyadics(vec![&(w * &Dyadic::from_f64(p[0])) - x, &(w * &Dyadic::from_f64(p[1])) - y]))
        .collect();
    depth_of_offsets(&offs, sample.masses())
}

fn polygon_or_empty(poly: &ExactPolygon) -> RegionPolytope {
    match poly.to_polygon() {
        Some(p) => RegionPolytope::Polygon(p),
        None => RegionPolytope::Empty { dim: 2 },
    }
}

/// Planar halfspace depth region `S_alpha`.
pub fn region_halfspace_2d(sample: &WeightedSample, alpha: f64) -> Result<RegionPolytope> {
    check_alpha(alpha)?;
    check_planar(sample)?;
    Ok(polygon_or_empty(&HalfspaceTable::new(sample).region(Mass::least_meeting(alpha))))
}

/// Planar halfspace region `{x : D(x) >= level}` for an exact mass level.
pub fn region_halfspace_2d_at(sample: &WeightedSample, level: Mass) -> Result<RegionPolytope> {
    check_level(level)?;
    check_planar(sample)?;
    Ok(polygon_or_empty(&HalfspaceTable::new(sample).region(level)))
}

fn check_level(level: Mass) -> Result<()> {
    if level == Mass::ZERO {
        return Err(Error::Parameter("depth level must be positive".into()));
    }
    Ok(())
}

/// Exact halfspace depth at every vertex of `{x : D(x) >= level}`
/// (empty when the region is).
pub fn region_vertex_depths(sample: &WeightedSample, level: Mass) -> Result<Vec<Mass>> {
    check_level(level)?;
    check_planar(sample)?;
    let poly = HalfspaceTable::new(sample).region(level);
    Ok(poly.vertices().map(|v| vertex_depth(sample, v)).collect())
}

/// Depth region for any supported family.
pub fn region(sample: &WeightedSample, family: &DepthFamily, alpha: f64) -> Result<RegionPolytope> {
    match family {
        DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements => region_halfspace_2d(sample, alpha),
        DepthFamily::AxisParallel(o) | DepthFamily::IntervalComplements(o) => region_axis(o, sample, alpha),
        DepthFamily::BallComplements { .. } => {
            Err(Error::Parameter("regions for ball complements are not computed; use the grid oracle".into()))
        }
    }
}

/// The set of deepest points and the maximal depth.
#[derive(Debug, Clone, PartialEq)]
pub struct Center {
    pub alpha_max: f64,
    pub mass: Mass,
    pub region: RegionPolytope,
}

/// Center `C(P, U) = S_{alpha_m}` for halfspace families in the plane and
/// interval families in any dimension.
///
/// For halfspaces `alpha_m` is located by bisection over the closed-halfplane
/// masses of the direction table and then confirmed as the exact depth at a
/// vertex of the resulting region.
pub fn center(sample: &WeightedSample, family: &DepthFamily) -> Result<Center> {
    match family {
        DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements => {
            if sample.dim() == 1 {
                return center_axis(&ConeOrder::identity(1), sample);
            }
            if sample.dim() != 2 {
                return Err(Error::Parameter(format!(
                    "halfspace centers are computed in the plane only (d = {})",
                    sample.dim()
                )));
            }
            center_halfspace_2d(sample)
        }
        DepthFamily::AxisParallel(o) | DepthFamily::IntervalComplements(o) => center_axis(o, sample),
        DepthFamily::BallComplements { .. } => {
            Err(Error::Parameter("centers for ball complements are not computed".into()))
        }
    }
}

fn center_halfspace_2d(sample: &WeightedSample) -> Result<Center> {
    let table = HalfspaceTable::new(sample);
    let levels = table.candidate_levels();
    // levels[0] is the smallest positive mass; S at that level is the hull
    let (mut lo, mut hi) = (0usize, levels.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if table.region(levels[mid]).is_empty() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut mass = levels[lo];
    let mut poly = table.region(mass);
    loop {
        let deepest = poly.vertices().map(|v| vertex_depth(sample, v)).max().unwrap_or(Mass::ZERO);
        if deepest <= mass {
            break;
        }
        mass = deepest;
        poly = table.region(mass);
    }
    Ok(Center { alpha_max: mass.to_f64(), mass, region: polygon_or_empty(&poly) })
}

fn center_axis(order: &ConeOrder, sample: &WeightedSample) -> Result<Center> {
    check_dim(order.dim(), sample.dim())?;
    let coords = order.transform_sample(sample);
    let mut mass = Mass::FULL;
    for k in 0..order.dim() {
        let best = coords
            .iter()
            .map(|(c, _)| {
                let t = c[k];
                let le: Mass = coords.iter().filter(|(d, _)| d[k] <= t).map(|e| e.1).sum();
                let ge: Mass = coords.iter().filter(|(d, _)| d[k] >= t).map(|e| e.1).sum();
                le.min(ge)
            })
            .max()
            .unwrap_or(Mass::ZERO);
        mass = mass.min(best);
    }
    let region = region_axis_at(order, sample, mass)?;
    Ok(Center { alpha_max: mass.to_f64(), mass, region })
}

/// Outcome of the `1/(d+1)` bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub alpha_max: f64,
    pub mass: Mass,
    pub bound: f64,
    pub holds: bool,
}

/// Maximal halfspace depth and whether it reaches `1/(d+1)`.
///
/// Exact for `d <= 2`. In three dimensions the maximum is taken over the
/// atoms and all intersection points of three planes through atoms, which
/// contains every vertex of the center for samples in general position.
pub fn bound_check(sample: &WeightedSample) -> Result<BoundCheck> {
    let d = sample.dim();
    let mass = match d {
        1 | 2 => center(sample, &DepthFamily::HalfspaceAll)?.mass,
        3 => max_depth_3d(sample)?,
        _ => return Err(Error::Budget(format!("bound check supports d <= 3 (got d = {d})"))),
    };
    Ok(BoundCheck {
        alpha_max: mass.to_f64(),
        mass,
        bound: 1.0 / (d as f64 + 1.0),
        holds: mass.at_least_reciprocal(d as u64 + 1),
    })
}

fn max_depth_3d(sample: &WeightedSample) -> Result<Mass> {
    let n = sample.len();
    if n > BOUND_3D_MAX_POINTS {
        return Err(Error::Budget(format!(
            "three-dimensional bound check accepts at most {BOUND_3D_MAX_POINTS} points, got {n}"
        )));
    }
    let pts: Vec<ExactVec> = sample.points().iter().map(|p| ExactVec::from_f64(p)).collect();
    let mut planes: Vec<(ExactVec, Dyadic)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross3(&pts[j].sub(&pts[i]), &pts[k].sub(&pts[i]));
                if !nrm.is_zero() {
                    let c = nrm.dot_exact(&pts[i]);
                    planes.push((nrm, c));
                }
            }
        }
    }
    let mut candidates: Vec<(ExactVec, Dyadic)> = pts.iter().map(|p| (p.clone(), Dyadic::from_i64(1))).collect();
    for a in 0..planes.len() {
        for b in a + 1..planes.len() {
            let bc = cross3(&planes[a].0, &planes[b].0);
            if bc.is_zero() {
                continue;
            }
            for c in b + 1..planes.len() {
                let (na, ca) = (&planes[a].0, &planes[a].1);
                let (nb, cb) = (&planes[b].0, &planes[b].1);
                let (nc, cc) = (&planes[c].0, &planes[c].1);
                let w = na.dot_exact(&cross3(nb, nc));
                if w.is_zero() {
                    continue;
                }
                let t1 = cross3(nb, nc).scale(ca);
                let t2 = cross3(nc, na).scale(cb);
                let t3 = bc.scale(cc);
                let x = ExactVec::from_dyadics(
                    (0..3).map(|k| &(&t1.exact()[k] + &t2.exact()[k]) + &t3.exact()[k]).collect(),
                );
                candidates.push((x, w));
            }
        }
    }
    let best = maybe_par_iter!(candidates)
        .map(|(x, w)| {
            let offs: Vec<ExactVec> = pts.iter().map(|p| p.scale(&w).sub(&x)).collect();
            depth_of_offsets(&offs, sample.masses())
        })
        .max()
        .unwrap_or(Mass::ZERO);
    Ok(best)
}

/// `cap_rho S_{alpha, rho}` over coordinate orders rotated by each angle (radians).
///
/// Each axis region is intersected through its four bounding halfplanes in
/// cone coordinates, so point and segment boxes are handled like any other.
pub fn rotated_axis_intersection(sample: &WeightedSample, angles: &[f64], alpha: f64) -> Result<RegionPolytope> {
    check_alpha(alpha)?;
    check_planar(sample)?;
    if angles.is_empty() {
        return Err(Error::Parameter("at least one rotation angle is required".into()));
    }
    let mut boxes: Vec<OrderInterval> = Vec::with_capacity(angles.len());
    for &a in angles {
        let order = ConeOrder::rotation(a)?;
        match region_axis(&order, sample, alpha)? {
            RegionPolytope::Box(b) => boxes.push(b),
            _ => return Ok(RegionPolytope::Empty { dim: 2 }),
        }
    }
    let start = RegionPolytope::Box(boxes[0].clone()).to_polygon().expect("planar box");
    let mut poly = Some(start);
    for b in &boxes {
        let order = b.order();
        for k in 0..2 {
            // row k of the cone map
            let row = [order.cone_coords(&[1.0, 0.0])[k], order.cone_coords(&[0.0, 1.0])[k]];
            for (sign, bound) in [(1.0, b.upper()[k]), (-1.0, -b.lower()[k])] {
                poly = match poly {
                    Some(p) => p.clip([sign * row[0], sign * row[1]], bound, 1e-12),
                    None => None,
                };
            }
        }
    }
    Ok(match poly {
        Some(p) => RegionPolytope::Polygon(p),
        None => RegionPolytope::Empty { dim: 2 },
    })
}

/// A rectangular grid `lo + (hi - lo) * i / (n - 1)` per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub n: [usize; 2],
}

impl GridSpec {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        GridSpec { lo: [lo, lo], hi: [hi, hi], n: [n, n] }
    }

    /// Bounding box of the sample, widened by a tenth on each side.
    pub fn around(sample: &WeightedSample, n: usize) -> Self {
        let (lo, hi) = sample.bounds();
        let pad = |k: usize| 0.1 * (hi[k] - lo[k]).max(1.0);
        GridSpec { lo: [lo[0] - pad(0), lo[1] - pad(1)], hi: [hi[0] + pad(0), hi[1] + pad(1)], n: [n, n] }
    }

    pub fn coord(&self, k: usize, i: usize) -> f64 {
        if self.n[k] <= 1 {
            return self.lo[k];
        }
        self.lo[k] + (self.hi[k] - self.lo[k]) * i as f64 / (self.n[k] - 1) as f64
    }

    /// Cell size along each axis.
    pub fn step(&self) -> [f64; 2] {
        let s = |k: usize| if self.n[k] <= 1 { 0.0 } else { (self.hi[k] - self.lo[k]) / (self.n[k] - 1) as f64 };
        [s(0), s(1)]
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.n[0])
            .flat_map(|i| (0..self.n[1]).map(move |j| (i, j)))
            .map(|(i, j)| [self.coord(0, i), self.coord(1, j)])
            .collect()
    }
}

/// Grid points whose depth is at least `alpha`, in grid order.
pub fn region_grid_oracle(
    sample: &WeightedSample,
    family: &DepthFamily,
    alpha: f64,
    grid: &GridSpec,
) -> Result<Vec<[f64; 2]>> {
    check_planar(sample)?;
    check_alpha(alpha)?;
    let flags: Vec<bool> = maybe_par_iter!(grid.points())
        .map(|p| depth(&p, sample, family).map(|d| d.mass.meets(alpha)))
        .collect::<Result<Vec<bool>>>()?;
    Ok(grid.points().into_iter().zip(flags).filter(|(_, f)| *f).map(|(p, _)| p).collect())
}
