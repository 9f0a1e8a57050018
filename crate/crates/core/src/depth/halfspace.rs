use std::cmp::Ordering;

use super::{check_finite, DepthFamily, DepthValue};
use crate::error::{check_dim, Error, Result};
use crate::exact::{cross3, sign_cross2, sign_dot, Dyadic, ExactVec};
use crate::mass::Mass;
use crate::measure::WeightedSample;
use crate::order::ConeOrder;

/// Largest dimension handled by [`halfspace_depth_exact`].
pub const EXACT_MAX_DIM: usize = 3;
/// Largest sample handled by [`halfspace_depth_exact`].
pub const EXACT_MAX_POINTS: usize = 200;

/// 0 for directions with angle in `[0, pi)`, 1 for `[pi, 2 pi)`.
fn half(v: &ExactVec) -> u8 {
    let (x, y) = (v.exact()[0].signum(), v.exact()[1].signum());
    if y == Ordering::Greater || (y == Ordering::Equal && x == Ordering::Greater) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order of nonzero 2-vectors, starting at angle 0.
pub(crate) fn angle_cmp(a: &ExactVec, b: &ExactVec) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| sign_cross2(a, b).reverse())
}

/// Nonzero offsets `p - x` with their masses, and the mass located at `x`.
fn offsets(x: &[f64], sample: &WeightedSample) -> (Vec<(ExactVec, Mass)>, Mass) {
    let mut at_x = Mass::ZERO;
    let mut rest = Vec::with_capacity(sample.len());
    for (p, m) in sample.iter() {
        let v = ExactVec::diff(p, x);
        if v.is_zero() {
            at_x += m;
        } else {
            rest.push((v, m));
        }
    }
    (rest, at_x)
}

/// Exact Tukey depth in the plane by an angular sweep around `x`.
///
/// Offsets are grouped by exact direction; for each group the mass strictly
/// counterclockwise within a half turn, plus the exactly opposite group, is
/// found with two pointers over the doubled circular order.
pub fn halfspace_depth_2d(x: &[f64], sample: &WeightedSample) -> Result<DepthValue> {
    check_dim(2, sample.dim())?;
    check_dim(2, x.len())?;
    check_finite(x)?;
    let (mut rest, at_x) = offsets(x, sample);
    rest.sort_by(|a, b| angle_cmp(&a.0, &b.0));

    let mut groups: Vec<(ExactVec, Mass)> = Vec::new();
    for (v, m) in rest {
        match groups.last_mut() {
            Some((g, gm)) if angle_cmp(g, &v) == Ordering::Equal => *gm += m,
            _ => groups.push((v, m)),
        }
    }
    let total: Mass = groups.iter().map(|g| g.1).sum();
    let k = groups.len();
    if k == 0 {
        return Ok(DepthValue::new(at_x, DepthFamily::HalfspaceAll, true));
    }

    let mut prefix = vec![Mass::ZERO; 2 * k + 1];
    for i in 0..2 * k {
        prefix[i + 1] = prefix[i] + groups[i % k].1;
    }
    // direction j lies in (a_i, a_i + pi]
    let within = |i: usize, j: usize| match sign_cross2(&groups[i].0, &groups[j].0) {
        Ordering::Greater => true,
        Ordering::Equal => sign_dot(&groups[i].0, &groups[j].0) == Ordering::Less,
        Ordering::Less => false,
    };

    let mut best = total;
    let mut end = 0;
    for i in 0..k {
        end = end.max(i + 1);
        while end < i + k && within(i, end % k) {
            end += 1;
        }
        let side = prefix[end] - prefix[i + 1];
        best = best.min(side).min(total - side);
    }
    Ok(DepthValue::new(at_x + best, DepthFamily::HalfspaceAll, true))
}

/// Tukey depth with open halfplanes: `inf P(H)` over open `H` containing `x`.
///
/// One direction is taken strictly inside every arc between consecutive
/// critical normals; for each the open halfplane reaches up to the nearest
/// positive projection.
pub fn halfspace_depth_open_2d(x: &[f64], sample: &WeightedSample) -> Result<DepthValue> {
    check_dim(2, sample.dim())?;
    check_dim(2, x.len())?;
    check_finite(x)?;
    let (rest, at_x) = offsets(x, sample);
    if rest.is_empty() {
        return Ok(DepthValue::new(at_x, DepthFamily::HalfspaceAll, true));
    }
    let mut normals: Vec<ExactVec> = Vec::with_capacity(2 * rest.len());
    for (v, _) in &rest {
        let n = v.perp();
        normals.push(n.neg());
        normals.push(n);
    }
    normals.sort_by(angle_cmp);
    normals.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);

    let mut best = Mass::FULL;
    for i in 0..normals.len() {
        let (a, b) = (&normals[i], &normals[(i + 1) % normals.len()]);
        let u = if sign_cross2(a, b) == Ordering::Greater {
            ExactVec::from_dyadics(a.exact().iter().zip(b.exact()).map(|(p, q)| p + q).collect())
        } else {
            a.perp()
        };
        let proj: Vec<Dyadic> = rest.iter().map(|(v, _)| u.dot_exact(v)).collect();
        let gap = proj.iter().filter(|p| p.signum() == Ordering::Greater).min_by(|p, q| p.cmp_exact(q));
        let inside: Mass = rest
            .iter()
            .zip(&proj)
            .filter(|(_, p)| gap.is_none_or(|g| p.cmp_exact(g) == Ordering::Less))
            .map(|((_, m), _)| *m)
            .sum();
        best = best.min(at_x + inside);
    }
    Ok(DepthValue::new(best, DepthFamily::HalfspaceAll, true))
}

/// Exact halfspace depth for `d <= 3` by enumerating the cells of the
/// arrangement of hyperplanes orthogonal to the offsets `p - x`.
///
/// Every cell is reached as a lexicographic perturbation of one of its
/// vertices, so no tolerance is involved.
pub fn halfspace_depth_exact(x: &[f64], sample: &WeightedSample) -> Result<DepthValue> {
    check_dim(sample.dim(), x.len())?;
    check_finite(x)?;
    if sample.dim() > EXACT_MAX_DIM || sample.len() > EXACT_MAX_POINTS {
        return Err(Error::Budget(format!(
            "exact halfspace depth supports d <= {EXACT_MAX_DIM} and n <= {EXACT_MAX_POINTS} \
             (got d = {}, n = {}); use the Monte Carlo bound",
            sample.dim(),
            sample.len()
        )));
    }
    let vs: Vec<ExactVec> = sample.points().iter().map(|p| ExactVec::diff(p, x)).collect();
    let mass = depth_of_offsets(&vs, sample.masses());
    Ok(DepthValue::new(mass, DepthFamily::HalfspaceAll, true))
}

/// `min_u P(u . V >= 0)` over nonzero `u`, for exact offsets `V` in dimension 1 to 3.
///
/// Offsets may be homogeneous (`w p - X`), which lets callers evaluate depth
/// at rational points.
pub(crate) fn depth_of_offsets(vs: &[ExactVec], masses: &[Mass]) -> Mass {
    let mut at_x = Mass::ZERO;
    let mut rest: Vec<(&ExactVec, Mass)> = Vec::with_capacity(vs.len());
    for (v, &m) in vs.iter().zip(masses) {
        if v.is_zero() {
            at_x += m;
        } else {
            rest.push((v, m));
        }
    }
    if rest.is_empty() {
        return at_x;
    }
    let best = match rest[0].0.dim() {
        1 => collinear_min(&rest),
        2 => cells_2d(&rest),
        _ => cells_3d(&rest),
    };
    at_x + best
}

/// All offsets on one line through the origin.
fn collinear_min(rest: &[(&ExactVec, Mass)]) -> Mass {
    let r = rest[0].0;
    let pos: Mass = rest.iter().filter(|(v, _)| sign_dot(r, v) == Ordering::Greater).map(|e| e.1).sum();
    let total: Mass = rest.iter().map(|e| e.1).sum();
    pos.min(total - pos)
}

/// Sign of the first nonzero entry.
fn lex(a: Ordering, b: Ordering) -> Ordering {
    if a == Ordering::Equal {
        b
    } else {
        a
    }
}

fn flip(s: Ordering, neg: bool) -> Ordering {
    if neg {
        s.reverse()
    } else {
        s
    }
}

/// Directions `s0 perp(v_i) + eps s1 v_i` reach every arc of the circle.
fn cells_2d(rest: &[(&ExactVec, Mass)]) -> Mass {
    let mut best = Mass::FULL;
    for (vi, _) in rest {
        let n = vi.perp();
        let signs: Vec<(Ordering, Ordering, Mass)> =
            rest.iter().map(|(v, m)| (sign_dot(&n, v), sign_dot(vi, v), *m)).collect();
        for s0 in [false, true] {
            for s1 in [false, true] {
                let mass: Mass = signs
                    .iter()
                    .filter(|(a, b, _)| lex(flip(*a, s0), flip(*b, s1)) == Ordering::Greater)
                    .map(|e| e.2)
                    .sum();
                best = best.min(mass);
            }
        }
    }
    best
}

/// Directions `s0 u0 + eps s1 a + eps^2 s2 t` around each vertex
/// `u0 = v_i x v_j` of the spherical arrangement, where `a` runs along each
/// great circle through `u0` and `t` picks a side.
fn cells_3d(rest: &[(&ExactVec, Mass)]) -> Mass {
    let n = rest.len();
    let mut best = Mass::FULL;
    let mut any_vertex = false;
    for i in 0..n {
        for j in i + 1..n {
            let u0 = cross3(rest[i].0, rest[j].0);
            if u0.is_zero() {
                continue;
            }
            any_vertex = true;
            let (mut pos, mut neg) = (Mass::ZERO, Mass::ZERO);
            let mut zero: Vec<usize> = Vec::new();
            for (k, (v, m)) in rest.iter().enumerate() {
                match sign_dot(&u0, v) {
                    Ordering::Greater => pos += *m,
                    Ordering::Less => neg += *m,
                    Ordering::Equal => zero.push(k),
                }
            }
            for &c in &zero {
                let a = cross3(&u0, rest[c].0);
                let t = cross3(&u0, &a);
                let signs: Vec<(Ordering, Ordering, Mass)> =
                    zero.iter().map(|&k| (sign_dot(&a, rest[k].0), sign_dot(&t, rest[k].0), rest[k].1)).collect();
                for s1 in [false, true] {
                    for s2 in [false, true] {
                        let on_plane: Mass = signs
                            .iter()
                            .filter(|(sa, st, _)| lex(flip(*sa, s1), flip(*st, s2)) == Ordering::Greater)
                            .map(|e| e.2)
                            .sum();
                        best = best.min(pos.min(neg) + on_plane);
                    }
                }
            }
        }
    }
    if any_vertex {
        best
    } else {
        collinear_min(rest)
    }
}

/// Depth for complements of order intervals of `order`.
///
/// Reduces to the axis-parallel halfspaces tangent at `x` in cone
/// coordinates: `min_i min(P(Y_i <= y_i), P(Y_i >= y_i))` with `Y = T X`, `y = T x`.
pub fn axis_depth(x: &[f64], sample: &WeightedSample, order: &ConeOrder) -> Result<DepthValue> {
    check_dim(order.dim(), sample.dim())?;
    check_dim(order.dim(), x.len())?;
    check_finite(x)?;
    let y = order.cone_coords(x);
    let coords = order.transform_sample(sample);
    let mut best = Mass::FULL;
    for (k, &yk) in y.iter().enumerate() {
        let le: Mass = coords.iter().filter(|(c, _)| c[k] <= yk).map(|e| e.1).sum();
        let ge: Mass = coords.iter().filter(|(c, _)| c[k] >= yk).map(|e| e.1).sum();
        best = best.min(le).min(ge);
    }
    Ok(DepthValue::new(best, DepthFamily::AxisParallel(order.clone()), true))
}
