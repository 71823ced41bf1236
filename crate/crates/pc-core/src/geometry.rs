//! Plane primitives: points, segments, simple polylines, finite unions of
//! points and segments, affine maps, diameters and Hausdorff distances.
//!
//! All predicates use the absolute tolerance [`TOL`]: two points closer than
//! `TOL` are treated as the same point. Coordinates are expected to live at
//! unit-square scale, where the constructions in this crate keep their
//! vertices on dyadic or near-dyadic values.

use std::collections::BTreeMap;

use thiserror::Error;

/// Absolute geometric identification tolerance. The tree-indexed figures at
/// the supported depths keep intended contacts exact (dyadic coordinates)
/// while their finest intended separations stay above 4e-10, so the radius
/// sits far below every real feature and far above float rounding.
pub const TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("polyline is not simple")]
    NotSimple,
    #[error("polyline has coincident consecutive vertices")]
    RepeatedVertex,
    #[error("empty complex")]
    EmptyComplex,
    #[error("point or segment index out of range")]
    IndexOutOfRange,
    #[error("duplicate segment in complex")]
    DuplicateSegment,
    #[error("coordinate is not finite")]
    NotFinite,
    #[error("sampling step must be positive")]
    BadStep,
}

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn dist2(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Same point under the global tolerance.
    pub fn same(&self, other: Point) -> bool {
        self.dist(other) <= TOL
    }

    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    /// Lexicographic comparison by (x, y); used for deterministic choices.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

pub(crate) fn cross(ux: f64, uy: f64, vx: f64, vy: f64) -> f64 {
    ux * vy - uy * vx
}

/// Distance from `p` to the segment `[a, b]`; accepts `a == b`.
pub fn point_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let l2 = a.dist2(b);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / l2;
    let t = t.clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Parameter of the point of `[a, b]` closest to `p`, clamped to `[0, 1]`.
pub fn project_param(p: Point, a: Point, b: Point) -> f64 {
    let l2 = a.dist2(b);
    if l2 == 0.0 {
        return 0.0;
    }
    (((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / l2).clamp(0.0, 1.0)
}

/// A nondegenerate line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    /// Endpoints must differ exactly; degenerate data belongs in isolated points.
    pub fn new(p: Point, q: Point) -> Result<Segment, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Segment { p, q })
    }

    pub fn len(&self) -> f64 {
        self.p.dist(self.q)
    }
}

/// Classification of the intersection of two segments.
///
/// An overlap is reported with its endpoints ordered along the first segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegIntersection {
    Empty,
    Point(Point),
    Overlap(Point, Point),
}

/// Snap `pt` to the nearest of the four segment endpoints when within
/// tolerance, so that touching configurations report exact input coordinates.
fn snap_to_endpoints(pt: Point, s1: &Segment, s2: &Segment) -> Point {
    let mut best = pt;
    let mut best_d = TOL;
    for cand in [s1.p, s1.q, s2.p, s2.q] {
        let d = pt.dist(cand);
        if d <= best_d {
            best_d = d;
            best = cand;
        }
    }
    best
}

/// Classify the intersection of two segments under [`TOL`].
pub fn seg_intersect(s1: &Segment, s2: &Segment) -> SegIntersection {
    let d1x = s1.q.x - s1.p.x;
    let d1y = s1.q.y - s1.p.y;
    let d2x = s2.q.x - s2.p.x;
    let d2y = s2.q.y - s2.p.y;
    let len1 = s1.len();
    let len2 = s2.len();

    // Collinear within tolerance: both endpoints of s2 on the line of s1.
    let line_d_p2 = cross(d1x, d1y, s2.p.x - s1.p.x, s2.p.y - s1.p.y).abs() / len1;
    let line_d_q2 = cross(d1x, d1y, s2.q.x - s1.p.x, s2.q.y - s1.p.y).abs() / len1;
    if line_d_p2 <= TOL && line_d_q2 <= TOL {
        let ta = ((s2.p.x - s1.p.x) * d1x + (s2.p.y - s1.p.y) * d1y) / (len1 * len1);
        let tb = ((s2.q.x - s1.p.x) * d1x + (s2.q.y - s1.p.y) * d1y) / (len1 * len1);
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        let ov_lo = lo.max(0.0);
        let ov_hi = hi.min(1.0);
        let gap = (ov_lo - ov_hi) * len1;
        if gap > TOL {
            return SegIntersection::Empty;
        }
        if (ov_hi - ov_lo) * len1 <= TOL {
            let t = 0.5 * (ov_lo + ov_hi);
            let pt = s1.p.lerp(s1.q, t.clamp(0.0, 1.0));
            return SegIntersection::Point(snap_to_endpoints(pt, s1, s2));
        }
        let a = snap_to_endpoints(s1.p.lerp(s1.q, ov_lo), s1, s2);
        let b = snap_to_endpoints(s1.p.lerp(s1.q, ov_hi), s1, s2);
        return SegIntersection::Overlap(a, b);
    }

    // Transversal case.
    let denom = cross(d1x, d1y, d2x, d2y);
    if denom.abs() > 1e-14 * len1 * len2 {
        let rx = s2.p.x - s1.p.x;
        let ry = s2.p.y - s1.p.y;
        let t = cross(rx, ry, d2x, d2y) / denom;
        let u = cross(rx, ry, d1x, d1y) / denom;
        let t_tol = TOL / len1;
        let u_tol = TOL / len2;
        if t >= -t_tol && t <= 1.0 + t_tol && u >= -u_tol && u <= 1.0 + u_tol {
            let pt = s1.p.lerp(s1.q, t.clamp(0.0, 1.0));
            let pt = snap_to_endpoints(pt, s1, s2);
            if point_segment_dist(pt, s1.p, s1.q) <= TOL
                && point_segment_dist(pt, s2.p, s2.q) <= TOL
            {
                return SegIntersection::Point(pt);
            }
        }
    }

    // Near-parallel or out-of-range: endpoint proximity is the last word.
    for e in [s1.p, s1.q] {
        if point_segment_dist(e, s2.p, s2.q) <= TOL {
            return SegIntersection::Point(e);
        }
    }
    for e in [s2.p, s2.q] {
        if point_segment_dist(e, s1.p, s1.q) <= TOL {
            return SegIntersection::Point(e);
        }
    }
    SegIntersection::Empty
}

/// True iff the polyline is simple: consecutive vertices distinct, adjacent
/// segments meeting only at their shared vertex, non-adjacent segments
/// disjoint, all under [`TOL`]. A single vertex is a degenerate arc and is
/// simple by convention.
pub fn is_simple(verts: &[Point]) -> bool {
    if verts.is_empty() {
        return false;
    }
    if verts.len() == 1 {
        return true;
    }
    for w in verts.windows(2) {
        if w[0].same(w[1]) {
            return false;
        }
    }
    let n = verts.len() - 1; // segment count
    for i in 0..n {
        let si = Segment { p: verts[i], q: verts[i + 1] };
        for j in (i + 1)..n {
            let sj = Segment { p: verts[j], q: verts[j + 1] };
            match seg_intersect(&si, &sj) {
                SegIntersection::Empty => {}
                SegIntersection::Point(pt) => {
                    if j == i + 1 {
                        if !pt.same(verts[j]) {
                            return false;
                        }
                    } else {
                        return false;
                    }
                }
                SegIntersection::Overlap(_, _) => return false,
            }
        }
    }
    true
}

/// A simple polygonal chain; one vertex encodes a degenerate arc.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyArc {
    verts: Vec<Point>,
}

impl PolyArc {
    pub fn new(verts: Vec<Point>) -> Result<PolyArc, GeometryError> {
        if verts.is_empty() {
            return Err(GeometryError::EmptyComplex);
        }
        if verts.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        if verts.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeometryError::RepeatedVertex);
        }
        if !is_simple(&verts) {
            return Err(GeometryError::NotSimple);
        }
        Ok(PolyArc { verts })
    }

    /// The degenerate arc `{p}`.
    pub fn singleton(p: Point) -> PolyArc {
        PolyArc { verts: vec![p] }
    }

    pub fn verts(&self) -> &[Point] {
        &self.verts
    }

    pub fn is_degenerate(&self) -> bool {
        self.verts.len() == 1
    }

    pub fn n_segs(&self) -> usize {
        self.verts.len().saturating_sub(1)
    }

    pub fn total_len(&self) -> f64 {
        self.verts.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

/// A finite union of points and segments; the finite stand-in for a compact
/// plane set. Segments index into the point table; named points live in
/// `labels`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarComplex {
    points: Vec<Point>,
    segments: Vec<(usize, usize)>,
    labels: BTreeMap<String, usize>,
}

impl PlanarComplex {
    pub fn new(
        points: Vec<Point>,
        segments: Vec<(usize, usize)>,
        labels: BTreeMap<String, usize>,
    ) -> Result<PlanarComplex, GeometryError> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        let n = points.len();
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j) in &segments {
            if i >= n || j >= n {
                return Err(GeometryError::IndexOutOfRange);
            }
            if points[i] == points[j] {
                return Err(GeometryError::DegenerateSegment);
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(GeometryError::DuplicateSegment);
            }
        }
        for &i in labels.values() {
            if i >= n {
                return Err(GeometryError::IndexOutOfRange);
            }
        }
        Ok(PlanarComplex { points, segments, labels })
    }

    pub fn empty() -> PlanarComplex {
        PlanarComplex { points: Vec::new(), segments: Vec::new(), labels: BTreeMap::new() }
    }

    pub fn from_polyline(verts: &[Point]) -> PlanarComplex {
        let mut b = ComplexBuilder::new();
        b.polyline(verts);
        b.build()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn segments(&self) -> &[(usize, usize)] {
        &self.segments
    }

    pub fn labels(&self) -> &BTreeMap<String, usize> {
        &self.labels
    }

    pub fn label_point(&self, name: &str) -> Option<Point> {
        self.labels.get(name).map(|&i| self.points[i])
    }

    pub fn seg_points(&self, k: usize) -> (Point, Point) {
        let (i, j) = self.segments[k];
        (self.points[i], self.points[j])
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_len(&self) -> f64 {
        self.segments.iter().map(|&(i, j)| self.points[i].dist(self.points[j])).sum()
    }

    /// Union of several complexes; points within [`TOL`] are identified and
    /// duplicate segments dropped. Overlapping collinear segments are kept
    /// as-is (planarization resolves them).
    pub fn merge(parts: &[&PlanarComplex]) -> PlanarComplex {
        let mut b = ComplexBuilder::new();
        for part in parts {
            let map: Vec<usize> = part.points.iter().map(|&p| b.point(p)).collect();
            for &(i, j) in &part.segments {
                b.segment_ids(map[i], map[j]);
            }
            for (name, &i) in &part.labels {
                b.label_id(name, map[i]);
            }
        }
        b.build()
    }
}

/// Max pairwise vertex distance. Segments are convex hulls of their
/// endpoints, so the vertex maximum is the diameter of the whole union.
pub fn diameter(c: &PlanarComplex) -> Result<f64, GeometryError> {
    if c.is_empty() {
        return Err(GeometryError::EmptyComplex);
    }
    let pts = c.points();
    let mut best: f64 = 0.0;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.max(pts[i].dist(pts[j]));
        }
    }
    Ok(best)
}

/// Exact distance from a point to the union of a complex's segments and
/// isolated points.
pub fn point_complex_dist(p: Point, c: &PlanarComplex) -> f64 {
    let mut used = vec![false; c.points.len()];
    let mut best = f64::INFINITY;
    for &(i, j) in &c.segments {
        used[i] = true;
        used[j] = true;
        best = best.min(point_segment_dist(p, c.points[i], c.points[j]));
    }
    for (i, &pt) in c.points.iter().enumerate() {
        if !used[i] {
            best = best.min(p.dist(pt));
        }
    }
    best
}

fn directed_hausdorff(a: &PlanarComplex, b: &PlanarComplex, step: f64) -> f64 {
    // Elements of b as (p, q) pairs; isolated points as p == q.
    let mut elems: Vec<(Point, Point)> = Vec::new();
    let mut used = vec![false; b.points.len()];
    for &(i, j) in &b.segments {
        used[i] = true;
        used[j] = true;
        elems.push((b.points[i], b.points[j]));
    }
    for (i, &p) in b.points.iter().enumerate() {
        if !used[i] {
            elems.push((p, p));
        }
    }
    let dist_to_b = |p: Point| -> f64 {
        let mut best = f64::INFINITY;
        for &(u, v) in &elems {
            let d = point_segment_dist(p, u, v);
            if d < best {
                best = d;
            }
        }
        best
    };

    // Evaluated distances only ever underestimate the supremum; refine source
    // segments until every piece is certified within `step` of the running
    // maximum. Two upper bounds per piece: the 1-Lipschitz bound, and the
    // convexity bound against a single target element (distance to one
    // segment is convex, so its max over a piece sits at the endpoints).
    let mut lower: f64 = 0.0;
    for &p in &a.points {
        lower = lower.max(dist_to_b(p));
    }
    let mut stack: Vec<(Point, Point, f64, f64)> = Vec::new();
    for &(i, j) in &a.segments {
        let (p, q) = (a.points[i], a.points[j]);
        stack.push((p, q, dist_to_b(p), dist_to_b(q)));
    }
    while let Some((p, q, dp, dq)) = stack.pop() {
        let half = 0.5 * p.dist(q);
        let lip = dp.max(dq) + half;
        let mut ub = lip;
        if ub > lower + step {
            for &(u, v) in &elems {
                let m = point_segment_dist(p, u, v).max(point_segment_dist(q, u, v));
                if m < ub {
                    ub = m;
                }
                if ub <= lower + step {
                    break;
                }
            }
        }
        if ub <= lower + step {
            continue;
        }
        let m = p.lerp(q, 0.5);
        let dm = dist_to_b(m);
        lower = lower.max(dm);
        stack.push((p, m, dp, dm));
        stack.push((m, q, dm, dq));
    }
    lower
}

/// Hausdorff distance estimate with certified absolute error at most `step`.
/// The estimate never exceeds the true distance.
pub fn hausdorff(a: &PlanarComplex, b: &PlanarComplex, step: f64) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyComplex);
    }
    if !(step > 0.0) {
        return Err(GeometryError::BadStep);
    }
    Ok(directed_hausdorff(a, b, step).max(directed_hausdorff(b, a, step)))
}

/// An affine map of the plane with nonsingular linear part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub tx: f64,
    pub ty: f64,
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        AffineMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0, tx: 0.0, ty: 0.0 }
    }

    /// Axis-aligned scaling plus translation.
    pub fn diag(sx: f64, sy: f64, tx: f64, ty: f64) -> AffineMap {
        AffineMap { a: sx, b: 0.0, c: 0.0, d: sy, tx, ty }
    }

    /// Positive homothety of ratio `r` placing the origin at `t`.
    pub fn homothety(r: f64, t: Point) -> AffineMap {
        AffineMap::diag(r, r, t.x, t.y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.a * p.x + self.b * p.y + self.tx, self.c * p.x + self.d * p.y + self.ty)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
            tx: self.a * other.tx + self.b * other.ty + self.tx,
            ty: self.c * other.tx + self.d * other.ty + self.ty,
        }
    }
}

/// Pointwise image of a complex; labels carry over.
pub fn affine_apply(m: &AffineMap, c: &PlanarComplex) -> PlanarComplex {
    PlanarComplex {
        points: c.points.iter().map(|&p| m.apply(p)).collect(),
        segments: c.segments.clone(),
        labels: c.labels.clone(),
    }
}

/// Incremental builder deduplicating points within [`TOL`] through a uniform
/// grid, and segments as unordered pairs.
pub struct ComplexBuilder {
    points: Vec<Point>,
    grid: std::collections::HashMap<(i64, i64), Vec<usize>>,
    segments: Vec<(usize, usize)>,
    seg_set: BTreeMap<(usize, usize), usize>,
    labels: BTreeMap<String, usize>,
}

const GRID_CELL: f64 = 1e-6;

impl ComplexBuilder {
    pub fn new() -> ComplexBuilder {
        ComplexBuilder {
            points: Vec::new(),
            grid: std::collections::HashMap::new(),
            segments: Vec::new(),
            seg_set: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    fn cell_of(p: Point) -> (i64, i64) {
        ((p.x / GRID_CELL).floor() as i64, (p.y / GRID_CELL).floor() as i64)
    }

    /// Index of `p`, identifying points within [`TOL`]; first insertion wins.
    pub fn point(&mut self, p: Point) -> usize {
        let (cx, cy) = Self::cell_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        if self.points[id].same(p) {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.grid.entry((cx, cy)).or_default().push(id);
        id
    }

    pub fn segment(&mut self, p: Point, q: Point) -> Option<usize> {
        let i = self.point(p);
        let j = self.point(q);
        self.segment_ids(i, j)
    }

    pub fn segment_ids(&mut self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return None; // collapsed under tolerance: an isolated point
        }
        let key = (i.min(j), i.max(j));
        if let Some(&k) = self.seg_set.get(&key) {
            return Some(k);
        }
        let k = self.segments.len();
        self.seg_set.insert(key, k);
        self.segments.push((i, j));
        Some(k)
    }

    pub fn polyline(&mut self, verts: &[Point]) {
        if verts.len() == 1 {
            self.point(verts[0]);
        }
        for w in verts.windows(2) {
            self.segment(w[0], w[1]);
        }
    }

    pub fn label(&mut self, name: &str, p: Point) {
        let id = self.point(p);
        self.label_id(name, id);
    }

    pub fn label_id(&mut self, name: &str, id: usize) {
        self.labels.insert(name.to_string(), id);
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn build(self) -> PlanarComplex {
        PlanarComplex { points: self.points, segments: self.segments, labels: self.labels }
    }
}

impl Default for ComplexBuilder {
    fn default() -> Self {
        ComplexBuilder::new()
    }
}
