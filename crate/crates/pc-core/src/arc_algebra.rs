//! Oriented polygonal arcs and their partial join.
//!
//! An oriented arc orders its endpoints as `(e0, e1)` and induces a total
//! order on its carrier. The join of two arcs cuts the first at the earliest
//! point (in the first arc's order) where the second one meets it, and glues
//! the tail of the second there. Folding the join over a sequence of arcs,
//! plus a Hausdorff tail certificate, gives the finite form of joining a
//! convergent arc chain into a single arc.

use crate::geometry::{
    self, diameter, hausdorff, is_simple, point_complex_dist, point_segment_dist, project_param,
    seg_intersect, PlanarComplex, Point, PolyArc, SegIntersection, Segment, TOL,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ArcError {
    #[error("point not on arc")]
    PointNotOnArc,
    #[error("vee undefined: disjoint")]
    VeeDisjoint,
    #[error("vee undefined: endpoint clash")]
    VeeEndpointClash,
    #[error("vee degenerate: tolerance collision")]
    VeeToleranceCollision,
    #[error("invalid polyline: {0}")]
    Geometry(#[from] geometry::GeometryError),
    #[error("fold_vee failed at index {index}: {cause}")]
    FoldFailed { index: usize, cause: Box<ArcError> },
    #[error("no convergence at tolerance: {0}")]
    NoConvergence(String),
    #[error("empty arc sequence")]
    EmptySequence,
}

/// A simple polygonal arc together with an orientation of its endpoints.
#[derive(Debug, Clone)]
pub struct OrientedPolyArc {
    arc: PolyArc,
    forward: bool,
}

/// Equality is oriented-geometry equality: same vertices in the same
/// traversal order, regardless of internal storage direction.
impl PartialEq for OrientedPolyArc {
    fn eq(&self, other: &Self) -> bool {
        self.n_verts() == other.n_verts()
            && (0..self.n_verts()).all(|i| self.vert(i) == other.vert(i))
    }
}

/// A position on an oriented arc: segment index plus parameter in `[0, 1]`,
/// both taken along the orientation. Canonical form puts `t = 1` as the next
/// segment's `t = 0`, except on the last segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPosition {
    pub seg: usize,
    pub t: f64,
}

impl ArcPosition {
    pub fn cmp_key(&self) -> (usize, f64) {
        (self.seg, self.t)
    }

    fn le(&self, other: &ArcPosition) -> bool {
        self.seg < other.seg || (self.seg == other.seg && self.t <= other.t)
    }

    fn lt(&self, other: &ArcPosition) -> bool {
        self.seg < other.seg || (self.seg == other.seg && self.t < other.t)
    }
}

impl OrientedPolyArc {
    pub fn new(arc: PolyArc) -> OrientedPolyArc {
        OrientedPolyArc { arc, forward: true }
    }

    pub fn from_points(verts: Vec<Point>) -> Result<OrientedPolyArc, ArcError> {
        Ok(OrientedPolyArc::new(PolyArc::new(verts)?))
    }

    /// The degenerate arc `{p}`, both endpoints equal to `p`.
    pub fn degenerate(p: Point) -> OrientedPolyArc {
        OrientedPolyArc::new(PolyArc::singleton(p))
    }

    pub fn carrier(&self) -> &PolyArc {
        &self.arc
    }

    pub fn is_degenerate(&self) -> bool {
        self.arc.is_degenerate()
    }

    pub fn n_verts(&self) -> usize {
        self.arc.verts().len()
    }

    pub fn n_segs(&self) -> usize {
        self.arc.n_segs()
    }

    /// Vertex `i` in orientation order.
    pub fn vert(&self, i: usize) -> Point {
        let v = self.arc.verts();
        if self.forward {
            v[i]
        } else {
            v[v.len() - 1 - i]
        }
    }

    pub fn oriented_verts(&self) -> Vec<Point> {
        (0..self.n_verts()).map(|i| self.vert(i)).collect()
    }

    /// Segment `i` in orientation order, as an ordered point pair.
    pub fn seg(&self, i: usize) -> (Point, Point) {
        (self.vert(i), self.vert(i + 1))
    }

    pub fn e0(&self) -> Point {
        self.vert(0)
    }

    pub fn e1(&self) -> Point {
        self.vert(self.n_verts() - 1)
    }

    pub fn to_complex(&self) -> PlanarComplex {
        PlanarComplex::from_polyline(self.arc.verts())
    }

    pub fn diam(&self) -> f64 {
        diameter(&self.to_complex()).unwrap_or(0.0)
    }

    /// Embedded point for a position.
    pub fn point_at(&self, pos: ArcPosition) -> Point {
        if self.is_degenerate() {
            return self.vert(0);
        }
        let (a, b) = self.seg(pos.seg);
        a.lerp(b, pos.t)
    }

    /// Canonical position of a vertex index.
    fn vertex_position(&self, i: usize) -> ArcPosition {
        if i + 1 == self.n_verts() && i > 0 {
            ArcPosition { seg: i - 1, t: 1.0 }
        } else {
            ArcPosition { seg: i, t: 0.0 }
        }
    }

    fn canonicalize(&self, seg: usize, t: f64) -> ArcPosition {
        let p = {
            let (a, b) = self.seg(seg);
            a.lerp(b, t)
        };
        // Snap to the segment's vertices when within tolerance.
        let (a, b) = self.seg(seg);
        if p.same(a) {
            return ArcPosition { seg, t: 0.0 };
        }
        if p.same(b) {
            return self.vertex_position(seg + 1);
        }
        ArcPosition { seg, t }
    }
}

/// Orientation flip: endpoints swap, the carrier is shared. An involution.
pub fn flip(i: &OrientedPolyArc) -> OrientedPolyArc {
    OrientedPolyArc { arc: i.arc.clone(), forward: !i.forward }
}

/// Ordered endpoint pair `(e0, e1)`; a degenerate arc reports its point twice.
pub fn endpoints(i: &OrientedPolyArc) -> (Point, Point) {
    (i.e0(), i.e1())
}

/// Canonical position of a point lying on the arc (within [`TOL`]). Among
/// several candidates the smallest position wins.
pub fn locate(i: &OrientedPolyArc, p: Point) -> Result<ArcPosition, ArcError> {
    if i.is_degenerate() {
        if i.vert(0).same(p) {
            return Ok(ArcPosition { seg: 0, t: 0.0 });
        }
        return Err(ArcError::PointNotOnArc);
    }
    let mut best: Option<ArcPosition> = None;
    for s in 0..i.n_segs() {
        let (a, b) = i.seg(s);
        let t = project_param(p, a, b);
        if p.dist(a.lerp(b, t)) <= TOL {
            let pos = i.canonicalize(s, t);
            if best.is_none_or(|bp| pos.lt(&bp)) {
                best = Some(pos);
            }
        }
    }
    best.ok_or(ArcError::PointNotOnArc)
}

/// `x ≤ y` in the total order the orientation induces on the carrier.
/// Points within [`TOL`] of each other compare equal.
pub fn arc_le(i: &OrientedPolyArc, x: Point, y: Point) -> Result<bool, ArcError> {
    if x.same(y) {
        locate(i, x)?;
        locate(i, y)?;
        return Ok(true);
    }
    let px = locate(i, x)?;
    let py = locate(i, y)?;
    Ok(px.le(&py))
}

/// Sub-arc between two on-arc points, oriented from `a` to `b`. The given
/// points become the end vertices exactly; `a = b` yields the degenerate arc.
pub fn sub_arc(i: &OrientedPolyArc, a: Point, b: Point) -> Result<OrientedPolyArc, ArcError> {
    let pa = locate(i, a)?;
    let pb = locate(i, b)?;
    if a.same(b) {
        return Ok(OrientedPolyArc::degenerate(a));
    }
    let (lo, hi, start, end) = if pa.le(&pb) { (pa, pb, a, b) } else { (pb, pa, b, a) };
    let mut verts = vec![start];
    // Interior vertices strictly between the two positions, in orientation order.
    let first = lo.seg + 1;
    let last = if hi.t > 0.0 { hi.seg } else { hi.seg.saturating_sub(1) };
    for k in first..=last {
        if k >= i.n_verts() {
            break;
        }
        let v = i.vert(k);
        if !v.same(start) && !v.same(end) {
            verts.push(v);
        }
    }
    verts.push(end);
    if !pa.le(&pb) {
        verts.reverse();
    }
    OrientedPolyArc::from_points(verts)
}

/// All intersection points of the two carriers, each with its position on
/// `i0`; overlap segments contribute their `i0`-minimal endpoint.
fn intersection_candidates(
    i0: &OrientedPolyArc,
    i1: &OrientedPolyArc,
) -> Vec<(Point, ArcPosition)> {
    let mut out: Vec<(Point, ArcPosition)> = Vec::new();
    let mut push = |i0: &OrientedPolyArc, p: Point, seg: usize| {
        let (a, b) = i0.seg(seg);
        let t = project_param(p, a, b);
        let pos = i0.canonicalize(seg, t);
        out.push((p, pos));
    };
    if i0.is_degenerate() {
        let p = i0.vert(0);
        let on_i1 = if i1.is_degenerate() {
            i1.vert(0).same(p)
        } else {
            (0..i1.n_segs()).any(|s| {
                let (a, b) = i1.seg(s);
                point_segment_dist(p, a, b) <= TOL
            })
        };
        if on_i1 {
            return vec![(p, ArcPosition { seg: 0, t: 0.0 })];
        }
        return Vec::new();
    }
    if i1.is_degenerate() {
        let p = i1.vert(0);
        for s in 0..i0.n_segs() {
            let (a, b) = i0.seg(s);
            if point_segment_dist(p, a, b) <= TOL {
                push(i0, p, s);
                break;
            }
        }
        return out;
    }
    for s0 in 0..i0.n_segs() {
        let (a0, b0) = i0.seg(s0);
        let seg0 = Segment { p: a0, q: b0 };
        for s1 in 0..i1.n_segs() {
            let (a1, b1) = i1.seg(s1);
            let seg1 = Segment { p: a1, q: b1 };
            match seg_intersect(&seg0, &seg1) {
                SegIntersection::Empty => {}
                SegIntersection::Point(p) => push(i0, p, s0),
                SegIntersection::Overlap(p, _q) => push(i0, p, s0),
            }
        }
    }
    out
}

/// Partial join of two oriented arcs: cut the first at the earliest point
/// `c` of the intersection in the first arc's order, append the second from
/// `c` to its end. Endpoints of the result are exactly
/// `(e0(i0), e1(i1))`.
pub fn vee(i0: &OrientedPolyArc, i1: &OrientedPolyArc) -> Result<OrientedPolyArc, ArcError> {
    let a0 = i0.e0();
    let b1 = i1.e1();
    if a0.same(b1) {
        return Err(ArcError::VeeEndpointClash);
    }
    let cands = intersection_candidates(i0, i1);
    let (mut c, _) = cands
        .iter()
        .min_by(|x, y| {
            x.1.cmp_key()
                .0
                .cmp(&y.1.cmp_key().0)
                .then(x.1.cmp_key().1.total_cmp(&y.1.cmp_key().1))
        })
        .copied()
        .ok_or(ArcError::VeeDisjoint)?;
    if c.same(a0) {
        c = a0;
    } else if c.same(b1) {
        c = b1;
    }
    let left = if c == a0 {
        OrientedPolyArc::degenerate(a0)
    } else {
        sub_arc(i0, a0, c)?
    };
    let right = if c == b1 {
        OrientedPolyArc::degenerate(b1)
    } else {
        sub_arc(i1, c, b1)?
    };
    let mut verts = left.oriented_verts();
    let rv = right.oriented_verts();
    if left.is_degenerate() {
        verts = rv;
    } else if !right.is_degenerate() {
        verts.extend_from_slice(&rv[1..]);
    }
    if verts.len() >= 2 && !is_simple(&verts) {
        return Err(ArcError::VeeToleranceCollision);
    }
    OrientedPolyArc::from_points(verts).map_err(|_| ArcError::VeeToleranceCollision)
}

/// Left fold of [`vee`] over a nonempty sequence; the index of the first
/// undefined step is reported on failure.
pub fn fold_vee(seq: &[OrientedPolyArc]) -> Result<OrientedPolyArc, ArcError> {
    let (first, rest) = seq.split_first().ok_or(ArcError::EmptySequence)?;
    let mut acc = first.clone();
    for (k, item) in rest.iter().enumerate() {
        acc = vee(&acc, item)
            .map_err(|e| ArcError::FoldFailed { index: k + 1, cause: Box::new(e) })?;
    }
    Ok(acc)
}

/// Evidence that a folded arc chain behaves like a convergent one: Hausdorff
/// increments between consecutive partial folds, distances from each partial
/// fold to the final arc, and the diameters bounding the tails.
#[derive(Debug, Clone)]
pub struct ConvergenceCertificate {
    /// `d_H(J_n, J_{n+1})` for each step.
    pub increments: Vec<f64>,
    /// `d_H(J_n, J_N)` for each partial fold.
    pub to_final: Vec<f64>,
    /// Diameter of the union of inputs from index `n` on.
    pub tail_diam: Vec<f64>,
    /// Diameter of each input arc.
    pub input_diams: Vec<f64>,
    /// Distance from the final endpoint to the declared limit point.
    pub endpoint_gap: f64,
    /// Sampling step used for the Hausdorff estimates.
    pub sample_step: f64,
}

/// Fold a whole finite chain and certify its Cauchy behaviour: the inputs
/// must shrink to the declared limit `b` within `tol` at the last index, and
/// each partial fold must stay within the tail diameter bound of the final
/// arc. Errors with `NoConvergence` when the chain does not settle.
pub fn lim_vee(
    seq: &[OrientedPolyArc],
    b: Point,
    tol: f64,
) -> Result<(OrientedPolyArc, ConvergenceCertificate), ArcError> {
    if seq.is_empty() {
        return Err(ArcError::EmptySequence);
    }
    if seq[0].e0().same(b) {
        return Err(ArcError::VeeEndpointClash);
    }
    let step = tol / 10.0;

    let mut partials: Vec<OrientedPolyArc> = Vec::with_capacity(seq.len());
    let mut acc = seq[0].clone();
    partials.push(acc.clone());
    for (k, item) in seq.iter().enumerate().skip(1) {
        acc = vee(&acc, item)
            .map_err(|e| ArcError::FoldFailed { index: k, cause: Box::new(e) })?;
        partials.push(acc.clone());
    }
    let final_arc = partials.last().unwrap().clone();
    let final_cx = final_arc.to_complex();

    let complexes: Vec<PlanarComplex> = partials.iter().map(|j| j.to_complex()).collect();
    let mut increments = Vec::new();
    for w in complexes.windows(2) {
        increments.push(hausdorff(&w[0], &w[1], step)?);
    }
    let mut to_final = Vec::new();
    for cx in &complexes {
        to_final.push(hausdorff(cx, &final_cx, step)?);
    }

    let input_diams: Vec<f64> = seq.iter().map(|i| i.diam()).collect();
    let mut tail_diam = vec![0.0; seq.len()];
    for n in (0..seq.len()).rev() {
        let parts: Vec<PlanarComplex> = seq[n..].iter().map(|i| i.to_complex()).collect();
        let refs: Vec<&PlanarComplex> = parts.iter().collect();
        tail_diam[n] = diameter(&PlanarComplex::merge(&refs))?;
    }

    let last = seq.last().unwrap();
    if last.diam() > tol {
        return Err(ArcError::NoConvergence(format!(
            "last input has diameter {} > tol {}",
            last.diam(),
            tol
        )));
    }
    let dist_last_to_b = point_complex_dist(b, &last.to_complex());
    if dist_last_to_b > tol {
        return Err(ArcError::NoConvergence(format!(
            "last input lies {} > tol {} away from the limit",
            dist_last_to_b, tol
        )));
    }
    // Tail bound: later partial folds may differ from the final arc only
    // within the reach of the remaining inputs.
    let mut running_max = 0.0f64;
    for n in (0..partials.len()).rev() {
        running_max = running_max.max(to_final[n]);
        if running_max > tail_diam[n] + 2.0 * step + TOL {
            return Err(ArcError::NoConvergence(format!(
                "tail bound exceeded at index {n}: {} > {}",
                running_max, tail_diam[n]
            )));
        }
    }

    let endpoint_gap = final_arc.e1().dist(b);
    let cert = ConvergenceCertificate {
        increments,
        to_final,
        tail_diam,
        input_diams,
        endpoint_gap,
        sample_step: step,
    };
    Ok((final_arc, cert))
}

/// An ordered list of oriented arcs intended to cover a parent arc end to end.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub pieces: Vec<OrientedPolyArc>,
}

/// Check that the pieces chain (`e1` of each piece is `e0` of the next),
/// start and finish at the parent's endpoints, advance strictly in the
/// parent's order, and stay on the parent carrier.
pub fn validate_subdivision(j: &OrientedPolyArc, s: &Subdivision) -> bool {
    if s.pieces.is_empty() {
        return false;
    }
    if !s.pieces[0].e0().same(j.e0()) {
        return false;
    }
    if !s.pieces.last().unwrap().e1().same(j.e1()) {
        return false;
    }
    for w in s.pieces.windows(2) {
        if !w[0].e1().same(w[1].e0()) {
            return false;
        }
    }
    let mut prev: Option<ArcPosition> = None;
    for piece in &s.pieces {
        for k in 0..piece.n_verts() {
            if locate(j, piece.vert(k)).is_err() {
                return false;
            }
        }
        let p0 = match locate(j, piece.e0()) {
            Ok(p) => p,
            Err(_) => return false,
        };
        let p1 = match locate(j, piece.e1()) {
            Ok(p) => p,
            Err(_) => return false,
        };
        if !p0.lt(&p1) {
            return false;
        }
        if let Some(prev) = prev {
            if p0.lt(&prev) {
                return false;
            }
        }
        prev = Some(p1);
    }
    true
}
