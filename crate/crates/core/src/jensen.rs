//! C-functions and median Jensen inequalities.
//!
//! A C-function has every sublevel set `{f <= t}` in the closed family `V`:
//! order intervals for a cone order, or convex sets. For such `f` some
//! median `m` satisfies `f(m) <= M` for every median `M` of `f(X)`, and
//! every point `m` of the center satisfies `f(m) <= Q_{1 - alpha_m}`.
//!
//! Minima and maxima over median boxes and centers are taken over vertices
//! and a fixed grid. Evaluators must be pure functions.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::depth::DepthFamily;
use crate::error::{check_dim, Error, Result};
use crate::mass::Mass;
use crate::measure::{quantiles_at, quantiles_of, QuantilePair, WeightedSample};
use crate::order::{ConeOrder, OrderInterval};
#[allow(unused_imports)]
use crate::par::{maybe_par_iter, prelude::*};
use crate::regions::{center, RegionPolytope};

/// Default grid resolution per axis.
pub const DEFAULT_GRID: usize = 64;
/// Absolute tolerance on the inequalities.
pub const TOLERANCE: f64 = 1e-12;
/// Cap on the number of grid points in one sweep.
const MAX_GRID_POINTS: usize = 1 << 18;
/// Random segment triples drawn by the quasi-convexity check.
const CONVEX_TRIALS: usize = 4096;

/// The family the sublevel sets of a C-function are declared to lie in.
#[derive(Debug, Clone, PartialEq)]
pub enum SublevelFamily {
    IntervalSublevels(ConeOrder),
    ConvexSublevels,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real function with a declared sublevel family.
#[derive(Clone)]
pub struct CFunctionSpec {
    evaluator: Evaluator,
    family: SublevelFamily,
    description: String,
}

impl fmt::Debug for CFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CFunctionSpec")
            .field("family", &self.family)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl CFunctionSpec {
    pub fn new(
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        family: SublevelFamily,
        description: impl Into<String>,
    ) -> Self {
        CFunctionSpec { evaluator: Arc::new(evaluator), family, description: description.into() }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    pub fn family(&self) -> &SublevelFamily {
        &self.family
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// The same evaluator with another declared family.
    pub fn with_family(&self, family: SublevelFamily) -> Self {
        CFunctionSpec { evaluator: self.evaluator.clone(), family, description: self.description.clone() }
    }

    /// `max_k |x_k - a_k| - |x_k - b_k|`.
    pub fn gauge_box(a: Vec<f64>, b: Vec<f64>, family: SublevelFamily) -> Result<Self> {
        check_dim(a.len(), b.len())?;
        let description = format!("gauge-box a={a:?} b={b:?}");
        Ok(CFunctionSpec::new(
            move |x| {
                x.iter()
                    .zip(a.iter().zip(&b))
                    .map(|(t, (a, b))| (t - a).abs() - (t - b).abs())
                    .fold(f64::NEG_INFINITY, f64::max)
            },
            family,
            description,
        ))
    }

    /// `|x|^2`.
    pub fn sqnorm(family: SublevelFamily) -> Self {
        CFunctionSpec::new(|x| x.iter().map(|c| c * c).sum(), family, "sqnorm")
    }

    /// `x_i` (zero-based).
    pub fn projection(i: usize, family: SublevelFamily) -> Self {
        CFunctionSpec::new(move |x| x.get(i).copied().unwrap_or(f64::NAN), family, format!("proj-{i}"))
    }

    /// `exp(s(x))` with `s` the signed distance to the line through `a` and
    /// `b`, positive on the side of `c`.
    pub fn exp_line(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Result<Self> {
        let n = [a[1] - b[1], b[0] - a[0]];
        let len = n[0].hypot(n[1]);
        let side = n[0] * (c[0] - a[0]) + n[1] * (c[1] - a[1]);
        if len == 0.0 || side == 0.0 {
            return Err(Error::DegenerateInput("exp-line needs three non-collinear points".into()));
        }
        let s = side.signum() / len;
        Ok(CFunctionSpec::new(
            move |x| (s * (n[0] * (x[0] - a[0]) + n[1] * (x[1] - a[1]))).exp(),
            SublevelFamily::ConvexSublevels,
            format!("exp-line a={a:?} b={b:?} c={c:?}"),
        ))
    }
}

/// Outcome of [`check_cfunction`].
#[derive(Debug, Clone, PartialEq)]
pub struct CFunctionCheck {
    pub holds: bool,
    /// A point breaking the declared sublevel shape.
    pub witness: Option<Vec<f64>>,
    /// The level at which the witness was found (interval families).
    pub level: Option<f64>,
}

impl CFunctionCheck {
    fn pass() -> Self {
        CFunctionCheck { holds: true, witness: None, level: None }
    }
}

/// Grid of `per_axis^d` points of a compact box in its own cone coordinates.
fn box_grid(b: &OrderInterval, per_axis: usize) -> Vec<Vec<f64>> {
    let d = b.dim();
    let cap = (MAX_GRID_POINTS as f64).powf(1.0 / d as f64).floor() as usize;
    let n = per_axis.min(cap).max(2);
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let c: Vec<f64> = (0..d)
                .map(|k| {
                    let i = idx % n;
                    idx /= n;
                    let (lo, hi) = (b.lower()[k], b.upper()[k]);
                    if i + 1 == n {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                })
                .collect();
            b.order().ambient(&c)
        })
        .collect()
}

fn slack(t: f64) -> f64 {
    TOLERANCE * t.abs().max(1.0)
}

/// Test the declared sublevel shape of `f` on a grid over `probe_box`.
///
/// Interval families: at each level, the order hull of the grid points with
/// `f <= t` must contain no grid point with `f > t`. Convex families:
/// `f(l x + (1 - l) y) <= max(f(x), f(y))` on seeded random triples.
pub fn check_cfunction(
    f: &CFunctionSpec,
    probe_box: &OrderInterval,
    grid: usize,
    levels: &[f64],
) -> Result<CFunctionCheck> {
    if !probe_box.is_compact() || probe_box.is_empty() {
        return Err(Error::Parameter("probe box must be compact and nonempty".into()));
    }
    let pts = box_grid(probe_box, grid);
    match &f.family {
        SublevelFamily::IntervalSublevels(order) => {
            check_dim(order.dim(), probe_box.dim())?;
            let evaluated: Vec<(Vec<f64>, f64)> = pts.iter().map(|p| (order.cone_coords(p), f.eval(p))).collect();
            for &t in levels {
                let inside: Vec<&Vec<f64>> = evaluated.iter().filter(|(_, v)| *v <= t).map(|(c, _)| c).collect();
                if inside.is_empty() {
                    continue;
                }
                let d = order.dim();
                let lo: Vec<f64> = (0..d).map(|k| inside.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min)).collect();
                let hi: Vec<f64> =
                    (0..d).map(|k| inside.iter().map(|c| c[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
                let bad = evaluated
                    .iter()
                    .zip(&pts)
                    .find(|((c, v), _)| *v > t + slack(t) && (0..d).all(|k| lo[k] <= c[k] && c[k] <= hi[k]));
                if let Some((_, p)) = bad {
                    return Ok(CFunctionCheck { holds: false, witness: Some(p.clone()), level: Some(t) });
                }
            }
            Ok(CFunctionCheck::pass())
        }
        SublevelFamily::ConvexSublevels => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let d = probe_box.dim();
            let draw = |rng: &mut ChaCha8Rng| {
                let c: Vec<f64> =
                    (0..d).map(|k| rng.random_range(probe_box.lower()[k]..=probe_box.upper()[k])).collect();
                probe_box.order().ambient(&c)
            };
            for _ in 0..CONVEX_TRIALS {
                let (x, y) = (draw(&mut rng), draw(&mut rng));
                let l: f64 = rng.random_range(0.0..=1.0);
                let m: Vec<f64> = x.iter().zip(&y).map(|(a, b)| l * a + (1.0 - l) * b).collect();
                let top = f.eval(&x).max(f.eval(&y));
                if f.eval(&m) > top + slack(top) {
                    return Ok(CFunctionCheck { holds: false, witness: Some(m), level: Some(top) });
                }
            }
            Ok(CFunctionCheck::pass())
        }
    }
}

/// Median interval of `f(X)`.
pub fn pushforward_medians(f: &CFunctionSpec, sample: &WeightedSample) -> QuantilePair {
    quantiles_of(&values(f, sample), 0.5)
}

fn values(f: &CFunctionSpec, sample: &WeightedSample) -> Vec<(f64, Mass)> {
    sample.iter().map(|(p, m)| (f.eval(p), m)).collect()
}

/// A box in `order` around the sample, widened by a tenth of its span.
fn probe_box(order: &ConeOrder, sample: &WeightedSample) -> Result<OrderInterval> {
    let (lo, hi) = order.cone_hull(sample.points())?;
    let pad: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.1 * (b - a).max(1.0)).collect();
    OrderInterval::new(
        order.clone(),
        lo.iter().zip(&pad).map(|(a, p)| a - p).collect(),
        hi.iter().zip(&pad).map(|(b, p)| b + p).collect(),
    )
}

fn levels_for(f: &CFunctionSpec, sample: &WeightedSample, extra: &[f64]) -> Vec<f64> {
    let mut l: Vec<f64> = sample.points().iter().map(|p| f.eval(p)).chain(extra.iter().copied()).collect();
    l.sort_by(f64::total_cmp);
    l.dedup();
    l
}

fn require(check: CFunctionCheck, f: &CFunctionSpec) -> Result<()> {
    if check.holds {
        return Ok(());
    }
    Err(Error::Precondition(format!(
        "{} is not a C-function for its declared family (witness {:?} at level {:?})",
        f.description,
        check.witness.unwrap_or_default(),
        check.level.unwrap_or(f64::NAN)
    )))
}

/// Outcome of [`jensen_median`].
#[derive(Debug, Clone, PartialEq)]
pub struct JensenMedian {
    /// Minimizer of `f` over the evaluated points of the median box.
    pub m_star: Vec<f64>,
    pub f_m: f64,
    pub median: QuantilePair,
    pub holds: bool,
}

/// `min f` over the median box against the medians of `f(X)`.
pub fn jensen_median(
    order: &ConeOrder,
    f: &CFunctionSpec,
    sample: &WeightedSample,
    grid: usize,
) -> Result<JensenMedian> {
    check_dim(order.dim(), sample.dim())?;
    match &f.family {
        SublevelFamily::IntervalSublevels(o) if o == order => {}
        _ => {
            return Err(Error::Precondition(
                "the function must be declared with interval sublevels for this order".into(),
            ))
        }
    }
    let median = pushforward_medians(f, sample);
    let probe = probe_box(order, sample)?;
    require(check_cfunction(f, &probe, grid.min(DEFAULT_GRID), &levels_for(f, sample, &[median.q_lo]))?, f)?;

    let mbox = order.median_set(sample)?;
    let mut cands = mbox.corners().unwrap_or_default();
    cands.extend(box_grid(&mbox, grid));
    let (m_star, f_m) = argbest(f, cands, |a, b| a < b);
    let holds = f_m <= median.q_lo + TOLERANCE;
    Ok(JensenMedian { m_star, f_m, median, holds })
}

/// Outcome of [`jensen_general`].
#[derive(Debug, Clone, PartialEq)]
pub struct JensenGeneral {
    pub alpha_max: f64,
    /// `Q_{1 - alpha_m}`: the largest `(1 - alpha_m)`-quantile of `f(X)`.
    pub q: f64,
    pub f_max: f64,
    pub argmax: Vec<f64>,
    pub worst_gap: f64,
    pub holds: bool,
    /// Number of points of the center at which `f` was evaluated.
    pub evaluated: usize,
}

/// `max f` over the center against `Q_{1 - alpha_m}` of `f(X)`.
pub fn jensen_general(
    family: &DepthFamily,
    f: &CFunctionSpec,
    sample: &WeightedSample,
    grid: usize,
) -> Result<JensenGeneral> {
    let order = match (family, &f.family) {
        (DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements, SublevelFamily::ConvexSublevels) => {
            ConeOrder::identity(sample.dim())
        }
        (DepthFamily::AxisParallel(o) | DepthFamily::IntervalComplements(o), SublevelFamily::IntervalSublevels(p))
            if o == p =>
        {
            o.clone()
        }
        _ => {
            return Err(Error::Precondition(format!(
                "{} sublevels do not match the {} family",
                match f.family {
                    SublevelFamily::ConvexSublevels => "convex",
                    SublevelFamily::IntervalSublevels(_) => "interval",
                },
                family.name()
            )))
        }
    };
    let c = center(sample, family)?;
    let q = quantiles_at(&values(f, sample), c.mass).q_hi;
    let probe = probe_box(&order, sample)?;
    require(check_cfunction(f, &probe, grid.min(DEFAULT_GRID), &levels_for(f, sample, &[q]))?, f)?;

    let cands = center_points(&c.region, grid);
    let evaluated = cands.len();
    let (argmax, f_max) = argbest(f, cands, |a, b| a > b);
    let worst_gap = f_max - q;
    Ok(JensenGeneral { alpha_max: c.alpha_max, q, f_max, argmax, worst_gap, holds: worst_gap <= TOLERANCE, evaluated })
}

/// Vertices, edge samples and interior grid points of a center.
fn center_points(region: &RegionPolytope, grid: usize) -> Vec<Vec<f64>> {
    match region {
        RegionPolytope::Box(b) => {
            let mut pts = b.corners().unwrap_or_default();
            pts.extend(box_grid(b, grid));
            pts
        }
        RegionPolytope::Polygon(p) => {
            let vs = p.vertices();
            let n = grid.max(2);
            let mut pts: Vec<Vec<f64>> = vs.iter().map(|v| v.to_vec()).collect();
            for (i, a) in vs.iter().enumerate() {
                let b = vs[(i + 1) % vs.len()];
                for k in 1..n {
                    let t = k as f64 / n as f64;
                    pts.push(vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                }
            }
            let lo = vs.iter().fold([f64::INFINITY; 2], |m, v| [m[0].min(v[0]), m[1].min(v[1])]);
            let hi = vs.iter().fold([f64::NEG_INFINITY; 2], |m, v| [m[0].max(v[0]), m[1].max(v[1])]);
            for i in 0..=n {
                for j in 0..=n {
                    let q =
                        [lo[0] + (hi[0] - lo[0]) * i as f64 / n as f64, lo[1] + (hi[1] - lo[1]) * j as f64 / n as f64];
                    if p.contains(q, 0.0) {
                        pts.push(q.to_vec());
                    }
                }
            }
            pts
        }
        RegionPolytope::Empty { .. } | RegionPolytope::FullSpace { .. } => Vec::new(),
    }
}

/// The first candidate whose value beats every other under `better`.
fn argbest(f: &CFunctionSpec, cands: Vec<Vec<f64>>, better: fn(f64, f64) -> bool) -> (Vec<f64>, f64) {
    let vals: Vec<f64> = maybe_par_iter!(cands.clone()).map(|p| f.eval(&p)).collect();
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate() {
        if better(v, vals[best]) {
            best = i;
        }
    }
    (cands[best].clone(), vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedSample {
        WeightedSample::uniform(vec![vec![0.0, 1.0], vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap()
    }

    fn id2() -> ConeOrder {
        ConeOrder::identity(2)
    }

    #[test]
    fn cfunction_checks() {
        let probe = OrderInterval::new(id2(), vec![-3.0, -3.0], vec![3.0, 3.0]).unwrap();
        let levels = [0.5, 1.0, 2.0, 4.0];
        let interval = SublevelFamily::IntervalSublevels(id2());
        let g = CFunctionSpec::gauge_box(vec![-1.0, -1.0], vec![1.0, 1.0], interval.clone()).unwrap();
        assert!(check_cfunction(&g, &probe, 41, &[-1.0, 0.0, 1.0, 1.5]).unwrap().holds);

        let sq = CFunctionSpec::sqnorm(interval);
        let bad = check_cfunction(&sq, &probe, 41, &levels).unwrap();
        assert!(!bad.holds);
        let w = bad.witness.unwrap();
        assert!(w[0] * w[0] + w[1] * w[1] > bad.level.unwrap());

        let sq = CFunctionSpec::sqnorm(SublevelFamily::ConvexSublevels);
        assert!(check_cfunction(&sq, &probe, 41, &levels).unwrap().holds);
        let wavy = CFunctionSpec::new(|x| x[0].sin(), SublevelFamily::ConvexSublevels, "sin");
        assert!(!check_cfunction(&wavy, &probe, 41, &[]).unwrap().holds);
    }

    #[test]
    fn pushforward_examples() {
        let y = CFunctionSpec::projection(1, SublevelFamily::ConvexSublevels);
        let q = pushforward_medians(&y, &triangle());
        assert_eq!((q.q_lo, q.q_hi), (0.0, 0.0));
        let seven = CFunctionSpec::new(|_| 7.0, SublevelFamily::ConvexSublevels, "seven");
        let q = pushforward_medians(&seven, &triangle());
        assert_eq!((q.q_lo, q.q_hi), (7.0, 7.0));
        let two = WeightedSample::uniform(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let x = CFunctionSpec::projection(0, SublevelFamily::ConvexSublevels);
        let q = pushforward_medians(&x, &two);
        assert_eq!((q.q_lo, q.q_hi), (0.0, 1.0));
    }

    #[test]
    fn median_inequality_examples() {
        let interval = SublevelFamily::IntervalSublevels(id2());
        let g = CFunctionSpec::gauge_box(vec![-1.0, -1.0], vec![1.0, 1.0], interval.clone()).unwrap();
        let r = jensen_median(&id2(), &g, &triangle(), DEFAULT_GRID).unwrap();
        assert!(r.holds);
        assert_eq!(r.m_star, vec![0.0, 0.0]);

        let x = CFunctionSpec::projection(0, interval.clone());
        let r = jensen_median(&id2(), &x, &triangle(), DEFAULT_GRID).unwrap();
        assert!(r.holds && r.median.contains(r.f_m));

        let one = WeightedSample::uniform(vec![vec![2.0, -1.0]]).unwrap();
        let r = jensen_median(&id2(), &g, &one, DEFAULT_GRID).unwrap();
        assert_eq!(r.m_star, vec![2.0, -1.0]);
        assert_eq!(r.f_m, r.median.q_lo);
        assert!(r.holds);

        let sq = CFunctionSpec::sqnorm(interval);
        assert!(matches!(jensen_median(&id2(), &sq, &triangle(), 16), Err(Error::Precondition(_))));
        let convex = CFunctionSpec::sqnorm(SublevelFamily::ConvexSublevels);
        assert!(matches!(jensen_median(&id2(), &convex, &triangle(), 16), Err(Error::Precondition(_))));
    }

    #[test]
    fn general_inequality_examples() {
        let f = CFunctionSpec::exp_line([0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]).unwrap();
        let r = jensen_general(&DepthFamily::HalfspaceAll, &f, &triangle(), DEFAULT_GRID).unwrap();
        assert_eq!(r.worst_gap, 0.0);
        assert!(r.holds);
        assert!((r.f_max - 2f64.sqrt().exp()).abs() < 1e-9);
        assert_eq!(r.argmax, vec![1.0, 0.0]);

        let k = CFunctionSpec::new(|_| 3.0, SublevelFamily::ConvexSublevels, "const");
        assert_eq!(jensen_general(&DepthFamily::HalfspaceAll, &k, &triangle(), 8).unwrap().worst_gap, 0.0);

        let axis = DepthFamily::AxisParallel(id2());
        assert!(matches!(jensen_general(&axis, &f, &triangle(), 8), Err(Error::Precondition(_))));
        let g =
            CFunctionSpec::gauge_box(vec![0.0, 0.0], vec![1.0, 2.0], SublevelFamily::IntervalSublevels(id2())).unwrap();
        assert!(jensen_general(&axis, &g, &triangle(), 8).unwrap().holds);
    }
}
