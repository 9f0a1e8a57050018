//! Convex polygons in the plane.
//!
//! [`ConvexPolygon`] is the floating-point output type: vertices
//! counterclockwise from the lexicographically smallest, collinear vertices
//! merged, points and segments allowed. The crate-internal exact clipper
//! keeps vertices as homogeneous dyadic points, each the meeting point of
//! two input lines, so coordinates never grow beyond a fixed degree.

use std::cmp::Ordering;

use crate::exact::{settle, Dyadic};

type P2 = [f64; 2];

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn norm(v: P2) -> f64 {
    v[0].hypot(v[1])
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// A closed convex polygon, possibly a single point or a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<P2>,
}

impl ConvexPolygon {
    /// Convex hull of a nonempty point set, in canonical vertex order.
    pub fn hull(points: &[P2]) -> Self {
        assert!(!points.is_empty(), "hull of an empty point set");
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() <= 2 {
            return ConvexPolygon { vertices: pts };
        }
        let mut lower: Vec<P2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<P2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon { vertices: lower }
    }

    pub fn point(p: P2) -> Self {
        ConvexPolygon { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        (1..v.len() - 1).map(|i| cross(v[0], v[i], v[i + 1])).sum::<f64>() / 2.0
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn extent(&self) -> f64 {
        self.vertices.iter().flat_map(|v| v.iter()).fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Membership with distance tolerance `tol`.
    pub fn contains(&self, p: P2, tol: f64) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => norm(sub(p, v[0])) <= tol,
            2 => segment_distance(p, v[0], v[1]) <= tol,
            n => (0..n).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                let len = norm(sub(b, a));
                cross(a, b, p) >= -tol * len
            }),
        }
    }

    /// Whether every vertex of `other` lies within `tol` of `self`.
    pub fn contains_polygon(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&p| self.contains(p, tol))
    }

    /// Image under `y -> A y + b`.
    pub fn affine(&self, a: [[f64; 2]; 2], b: P2) -> Self {
        let pts: Vec<P2> = self
            .vertices
            .iter()
            .map(|v| [a[0][0] * v[0] + a[0][1] * v[1] + b[0], a[1][0] * v[0] + a[1][1] * v[1] + b[1]])
            .collect();
        Self::hull(&pts)
    }

    /// Intersection with `{y : n . y <= c}`; `None` when empty.
    ///
    /// Vertices within `tol` (relative) of the line count as on it, so
    /// points and segments survive clipping by lines through them.
    pub fn clip(&self, n: P2, c: f64, tol: f64) -> Option<Self> {
        let v = &self.vertices;
        let scale = norm(n) * self.extent().max(1.0) + c.abs();
        let band = tol * scale;
        let s: Vec<f64> = v.iter().map(|p| n[0] * p[0] + n[1] * p[1] - c).collect();
        if s.iter().all(|&x| x <= band) {
            return Some(self.clone());
        }
        if s.iter().all(|&x| x > band) {
            return None;
        }
        let m = v.len();
        let mut out: Vec<P2> = Vec::with_capacity(m + 1);
        for i in 0..m {
            let j = (i + 1) % m;
            if s[i] <= band {
                out.push(v[i]);
            }
            let crosses = (s[i] < -band && s[j] > band) || (s[i] > band && s[j] < -band);
            if crosses && i != j {
                let t = s[i] / (s[i] - s[j]);
                out.push([v[i][0] + t * (v[j][0] - v[i][0]), v[i][1] + t * (v[j][1] - v[i][1])]);
            }
        }
        if out.is_empty() {
            return None;
        }
        Some(Self::hull(&out))
    }
}

fn segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return norm(sub(p, a));
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

/// The line `u . y = c`, bounding the halfplane `u . y <= c`.
#[derive(Debug, Clone)]
pub(crate) struct Line {
    u: [Dyadic; 2],
    c: Dyadic,
    ua: [f64; 2],
    ca: f64,
}

impl Line {
    pub(crate) fn new(u: [Dyadic; 2], c: Dyadic) -> Self {
        let ua = [u[0].to_f64(), u[1].to_f64()];
        let ca = c.to_f64();
        Line { u, c, ua, ca }
    }
}

/// The point `(x / w, y / w)` with `w > 0`.
#[derive(Debug, Clone)]
pub(crate) struct HPoint {
    h: [Dyadic; 3],
    a: [f64; 3],
}

impl HPoint {
    fn new(mut h: [Dyadic; 3]) -> Self {
        if h[2].signum() == Ordering::Less {
            h = [-&h[0], -&h[1], -&h[2]];
        }
        let a = [h[0].to_f64(), h[1].to_f64(), h[2].to_f64()];
        HPoint { h, a }
    }

    /// Intersection of two non-parallel lines.
    fn meet(l1: &Line, l2: &Line) -> Option<Self> {
        let w = &(&l1.u[0] * &l2.u[1]) - &(&l1.u[1] * &l2.u[0]);
        if w.is_zero() {
            return None;
        }
        let x = &(&l1.c * &l2.u[1]) - &(&l2.c * &l1.u[1]);
        let y = &(&l1.u[0] * &l2.c) - &(&l2.u[0] * &l1.c);
        Some(Self::new([x, y, w]))
    }

    pub(crate) fn homogeneous(&self) -> &[Dyadic; 3] {
        &self.h
    }

    /// Sign of `u . p - c`.
    fn side(&self, l: &Line) -> Ordering {
        let t = [l.ua[0] * self.a[0], l.ua[1] * self.a[1], -l.ca * self.a[2]];
        let approx = t[0] + t[1] + t[2];
        let mag = t[0].abs() + t[1].abs() + t[2].abs();
        settle(approx, mag, 3).unwrap_or_else(|| {
            let v = &(&(&l.u[0] * &self.h[0]) + &(&l.u[1] * &self.h[1])) - &(&l.c * &self.h[2]);
            v.signum()
        })
    }

    fn same(&self, o: &HPoint) -> bool {
        (&self.h[0] * &o.h[2]).eq_exact(&(&o.h[0] * &self.h[2]))
            && (&self.h[1] * &o.h[2]).eq_exact(&(&o.h[1] * &self.h[2]))
    }

    /// Lexicographic comparison of the affine points.
    fn cmp_lex(&self, o: &HPoint) -> Ordering {
        (&self.h[0] * &o.h[2])
            .cmp_exact(&(&o.h[0] * &self.h[2]))
            .then_with(|| (&self.h[1] * &o.h[2]).cmp_exact(&(&o.h[1] * &self.h[2])))
    }

    pub(crate) fn to_f64(&self) -> P2 {
        let w = self.h[2].to_f64();
        [self.h[0].to_f64() / w, self.h[1].to_f64() / w]
    }
}

/// Orientation of three homogeneous points (all with positive weight).
fn orient(p: &HPoint, q: &HPoint, r: &HPoint) -> Ordering {
    let det = |a: &[Dyadic; 3], b: &[Dyadic; 3], c: &[Dyadic; 3]| {
        let m0 = &(&b[1] * &c[2]) - &(&b[2] * &c[1]);
        let m1 = &(&b[0] * &c[2]) - &(&b[2] * &c[0]);
        let m2 = &(&b[0] * &c[1]) - &(&b[1] * &c[0]);
        &(&(&a[0] * &m0) - &(&a[1] * &m1)) + &(&a[2] * &m2)
    };
    det(&p.h, &q.h, &r.h).signum()
}

/// An exact convex polygon maintained under halfplane clipping.
///
/// Vertex `i` carries the index of the line through the edge leaving it.
#[derive(Debug, Clone)]
pub(crate) struct ExactPolygon {
    lines: Vec<Line>,
    verts: Vec<(HPoint, usize)>,
}

impl ExactPolygon {
    /// The axis-parallel rectangle `[lo, hi]`.
    pub(crate) fn rect(lo: P2, hi: P2) -> Self {
        let d = Dyadic::from_f64;
        let one = || Dyadic::from_i64(1);
        let zero = Dyadic::zero;
        // bottom, right, top, left
        let lines = vec![
            Line::new([zero(), -one()], -d(lo[1])),
            Line::new([one(), zero()], d(hi[0])),
            Line::new([zero(), one()], d(hi[1])),
            Line::new([-one(), zero()], -d(lo[0])),
        ];
        let corner = |a: usize, b: usize| HPoint::meet(&lines[a], &lines[b]).expect("perpendicular");
        let verts = vec![(corner(3, 0), 0), (corner(0, 1), 1), (corner(1, 2), 2), (corner(2, 3), 3)];
        ExactPolygon { lines, verts }
    }

    pub(crate) fn empty() -> Self {
        ExactPolygon { lines: Vec::new(), verts: Vec::new() }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub(crate) fn vertices(&self) -> impl Iterator<Item = &HPoint> {
        self.verts.iter().map(|v| &v.0)
    }

    /// Rough bounding box of the vertices.
    /// Keep the part in `u . y <= c`.
    pub(crate) fn clip(&mut self, line: Line) {
        if self.verts.is_empty() {
            return;
        }
        let s: Vec<Ordering> = self.verts.iter().map(|(v, _)| v.side(&line)).collect();
        if s.iter().all(|&x| x != Ordering::Greater) {
            return;
        }
        if s.iter().all(|&x| x == Ordering::Greater) {
            self.verts.clear();
            return;
        }
        let h = self.lines.len();
        self.lines.push(line);
        let m = self.verts.len();
        let mut out: Vec<(HPoint, usize)> = Vec::with_capacity(m + 1);
        for i in 0..m {
            let j = (i + 1) % m;
            let (v, e) = &self.verts[i];
            if s[i] != Ordering::Greater {
                let edge = if s[i] == Ordering::Equal && s[j] == Ordering::Greater { h } else { *e };
                out.push((v.clone(), edge));
            }
            let leaving = s[i] == Ordering::Less && s[j] == Ordering::Greater;
            let entering = s[i] == Ordering::Greater && s[j] == Ordering::Less;
            if leaving || entering {
                let p = HPoint::meet(&self.lines[*e], &self.lines[h])
                    .expect("an edge crossing the clip line is not parallel to it");
                out.push((p, if leaving { h } else { *e }));
            }
        }
        self.verts = out;
        self.cleanup();
    }

    fn cleanup(&mut self) {
        // drop zero-length edges, keeping the outgoing edge of the later copy
        let mut k = 0;
        while self.verts.len() > 1 && k < self.verts.len() {
            let next = (k + 1) % self.verts.len();
            if next != k && self.verts[k].0.same(&self.verts[next].0) {
                self.verts.remove(k);
                k = k.saturating_sub(1);
            } else {
                k += 1;
            }
        }
        if self.verts.len() < 3 {
            if self.verts.len() == 2 {
                self.settle_segment();
            }
            return;
        }
        let m = self.verts.len();
        let flat = (0..m).all(|i| {
            orient(&self.verts[i].0, &self.verts[(i + 1) % m].0, &self.verts[(i + 2) % m].0) == Ordering::Equal
        });
        if flat {
            let lo = (0..m).min_by(|&a, &b| self.verts[a].0.cmp_lex(&self.verts[b].0)).unwrap();
            let hi = (0..m).max_by(|&a, &b| self.verts[a].0.cmp_lex(&self.verts[b].0)).unwrap();
            let keep = [self.verts[lo].clone(), self.verts[hi].clone()];
            let candidates: Vec<usize> = self.verts.iter().map(|v| v.1).collect();
            self.verts = keep.to_vec();
            self.settle_segment_from(&candidates);
            return;
        }
        let mut i = 0;
        while i < self.verts.len() && self.verts.len() > 2 {
            let m = self.verts.len();
            let prev = (i + m - 1) % m;
            let next = (i + 1) % m;
            if orient(&self.verts[prev].0, &self.verts[i].0, &self.verts[next].0) == Ordering::Equal {
                self.verts.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn settle_segment(&mut self) {
        let candidates: Vec<usize> = self.verts.iter().map(|v| v.1).collect();
        self.settle_segment_from(&candidates);
    }

    /// Give both ends of a segment the line through it.
    fn settle_segment_from(&mut self, candidates: &[usize]) {
        let (a, b) = (&self.verts[0].0, &self.verts[1].0);
        if a.same(b) {
            self.verts.truncate(1);
            return;
        }
        let found = candidates
            .iter()
            .copied()
            .find(|&l| a.side(&self.lines[l]) == Ordering::Equal && b.side(&self.lines[l]) == Ordering::Equal);
        let l = found.unwrap_or_else(|| {
            let (p, q) = (&a.h, &b.h);
            let dx = &(&q[0] * &p[2]) - &(&p[0] * &q[2]);
            let dy = &(&q[1] * &p[2]) - &(&p[1] * &q[2]);
            let u = [-&dy, dx];
            let c = &(&u[0] * &p[0]) + &(&u[1] * &p[1]);
            let u = [&u[0] * &p[2], &u[1] * &p[2]];
            self.lines.push(Line::new(u, &c * &p[2]));
            self.lines.len() - 1
        });
        self.verts[0].1 = l;
        self.verts[1].1 = l;
    }

    /// Floating-point image in canonical order; `None` when empty.
    pub(crate) fn to_polygon(&self) -> Option<ConvexPolygon> {
        if self.verts.is_empty() {
            return None;
        }
        let pts: Vec<P2> = self.verts.iter().map(|v| v.0.to_f64()).collect();
        Some(ConvexPolygon::hull(&pts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(u: [f64; 2], c: f64) -> Line {
        Line::new([Dyadic::from_f64(u[0]), Dyadic::from_f64(u[1])], Dyadic::from_f64(c))
    }

    #[test]
    fn hull_is_canonical() {
        let h = ConvexPolygon::hull(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, 0.0], [0.5, 0.0]]);
        assert_eq!(h.vertices(), &[[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(h.area(), 1.0);
        let seg = ConvexPolygon::hull(&[[2.0, 2.0], [0.0, 0.0], [1.0, 1.0]]);
        assert_eq!(seg.vertices(), &[[0.0, 0.0], [2.0, 2.0]]);
        assert!(seg.contains([1.0, 1.0], 0.0));
        assert!(!seg.contains([1.0, 1.1], 1e-9));
    }

    #[test]
    fn float_clip_keeps_degenerate_results() {
        let sq = ConvexPolygon::hull(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let half = sq.clip([1.0, 0.0], 0.5, 1e-12).unwrap();
        assert_eq!(half.vertices(), &[[0.0, 0.0], [0.5, 0.0], [0.5, 1.0], [0.0, 1.0]]);
        let edge = sq.clip([1.0, 0.0], 0.0, 1e-12).unwrap();
        assert!(edge.is_segment());
        let corner = edge.clip([0.0, 1.0], 0.0, 1e-12).unwrap();
        assert!(corner.is_point());
        assert!(corner.clip([0.0, -1.0], 0.0, 1e-12).is_some());
        assert!(corner.clip([0.0, -1.0], -0.1, 1e-12).is_none());
    }

    #[test]
    fn exact_clip_to_triangle() {
        let mut p = ExactPolygon::rect([-2.0, -1.0], [2.0, 2.0]);
        p.clip(line([0.0, -1.0], 0.0)); // y >= 0
        p.clip(line([1.0, 1.0], 1.0)); // x + y <= 1
        p.clip(line([-1.0, 1.0], 1.0)); // y - x <= 1
        let t = p.to_polygon().unwrap();
        assert_eq!(t.vertices(), &[[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn exact_clip_degenerates_to_segment_and_point() {
        let mut p = ExactPolygon::rect([-1.0, -1.0], [1.0, 1.0]);
        p.clip(line([0.0, 1.0], 0.0));
        p.clip(line([0.0, -1.0], 0.0));
        let seg = p.to_polygon().unwrap();
        assert_eq!(seg.vertices(), &[[-1.0, 0.0], [1.0, 0.0]]);
        p.clip(line([1.0, 1.0], 0.5));
        assert_eq!(p.to_polygon().unwrap().vertices(), &[[-1.0, 0.0], [0.5, 0.0]]);
        p.clip(line([-1.0, 0.0], -0.5));
        assert_eq!(p.to_polygon().unwrap().vertices(), &[[0.5, 0.0]]);
        p.clip(line([1.0, 0.0], 0.5));
        assert_eq!(p.to_polygon().unwrap().vertices(), &[[0.5, 0.0]]);
        p.clip(line([1.0, 0.0], 0.25));
        assert!(p.is_empty());
    }

    #[test]
    fn exact_clip_touching_vertex() {
        let mut p = ExactPolygon::rect([0.0, 0.0], [1.0, 1.0]);
        p.clip(line([1.0, 1.0], 0.0));
        assert_eq!(p.to_polygon().unwrap().vertices(), &[[0.0, 0.0]]);
    }

    #[test]
    fn exact_clip_with_thirds() {
        // lines with non-dyadic intersection points stay exact
        let mut p = ExactPolygon::rect([-1.0, -1.0], [2.0, 2.0]);
        p.clip(line([-1.0, 0.0], 0.0));
        p.clip(line([0.0, -1.0], 0.0));
        p.clip(line([1.0, 2.0], 1.0));
        p.clip(line([2.0, 1.0], 1.0));
        let q = p.to_polygon().unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.vertices().iter().any(|v| (v[0] - 1.0 / 3.0).abs() < 1e-16 && (v[1] - 1.0 / 3.0).abs() < 1e-16));
    }
}
