//! Embedded graphs and the arc pseudo-metric.
//!
//! `planarize` turns a finite union of segments into a straight-line embedded
//! graph whose edges meet only at shared vertices. On such a graph the value
//! `delta(x, y)` is the exact minimum, over simple `x`–`y` paths, of the
//! path's Euclidean diameter; queries return the witness path. Disconnected
//! pairs get the value `+∞` with no witness.
//!
//! Min-diameter feasibility does not reduce to reachability inside a disk
//! filter: two vertices each within `r` of both endpoints can still lie more
//! than `r` apart, so the diameter constraint binds across the whole path.
//! The search is therefore a depth-first branch-and-bound over simple paths,
//! pruning on the running diameter against the best found.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{
    seg_intersect, ComplexBuilder, PlanarComplex, Point, SegIntersection, Segment, TOL,
};

/// Default cap on branch-and-bound node expansions per query.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Vertex-count cap for the exhaustive reference search.
pub const ORACLE_MAX_VERTICES: usize = 14;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("vertex index out of range")]
    VertexOutOfRange,
    #[error("search budget exceeded after {expanded} node expansions")]
    BudgetExceeded { expanded: u64 },
    #[error("graph too large for exhaustive search: {n} vertices (max {max})")]
    OracleTooLarge { n: usize, max: usize },
    #[error("ball radius must be positive and finite")]
    BadRadius,
    #[error("sampling step must satisfy 0 < h <= eps/4")]
    BadSampling,
}

/// A straight-line embedded graph: edges intersect only at shared endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    verts: Vec<Point>,
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    labels: BTreeMap<String, usize>,
    /// For each edge, the input segment indices it came from.
    edge_sources: Vec<Vec<usize>>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbor, edge id), sorted by neighbor
}

impl EmbeddedGraph {
    pub fn n_verts(&self) -> usize {
        self.verts.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vert(&self, i: usize) -> Point {
        self.verts[i]
    }

    pub fn verts(&self) -> &[Point] {
        &self.verts
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_len(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn edge_sources(&self, e: usize) -> &[usize] {
        &self.edge_sources[e]
    }

    pub fn labels(&self) -> &BTreeMap<String, usize> {
        &self.labels
    }

    pub fn label_vertex(&self, name: &str) -> Option<usize> {
        self.labels.get(name).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.verts[u].dist(self.verts[v])
    }

    /// Vertex within [`TOL`] of `p`, if any; nearest one wins.
    pub fn vertex_near(&self, p: Point) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (i, &v) in self.verts.iter().enumerate() {
            let d = v.dist(p);
            if d <= TOL && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        best.map(|(_, i)| i)
    }
}

/// Split every segment at its intersections with all others, identify
/// vertices within [`TOL`], and keep every original point as a vertex.
/// Labels carry over to the snapped vertices.
pub fn planarize(c: &PlanarComplex) -> EmbeddedGraph {
    let n_segs = c.segments().len();
    let segs: Vec<Segment> = (0..n_segs)
        .map(|k| {
            let (p, q) = c.seg_points(k);
            Segment { p, q }
        })
        .collect();
    let param_on = |k: usize, pt: Point| -> f64 {
        let s = &segs[k];
        crate::geometry::project_param(pt, s.p, s.q)
    };
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); n_segs];
    for i in 0..n_segs {
        for j in (i + 1)..n_segs {
            match seg_intersect(&segs[i], &segs[j]) {
                SegIntersection::Empty => {}
                SegIntersection::Point(p) => {
                    cuts[i].push(param_on(i, p));
                    cuts[j].push(param_on(j, p));
                }
                SegIntersection::Overlap(p, q) => {
                    for pt in [p, q] {
                        cuts[i].push(param_on(i, pt));
                        cuts[j].push(param_on(j, pt));
                    }
                }
            }
        }
    }

    let mut b = ComplexBuilder::new();
    // Original points first so labels resolve to stable vertices.
    let point_map: Vec<usize> = c.points().iter().map(|&p| b.point(p)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_sources: Vec<Vec<usize>> = Vec::new();
    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for k in 0..n_segs {
        let s = &segs[k];
        let mut ts = std::mem::take(&mut cuts[k]);
        ts.push(0.0);
        ts.push(1.0);
        ts.sort_by(f64::total_cmp);
        let mut ids: Vec<usize> = Vec::with_capacity(ts.len());
        for &t in &ts {
            let pt = if t <= 0.0 {
                s.p
            } else if t >= 1.0 {
                s.q
            } else {
                s.p.lerp(s.q, t)
            };
            let id = b.point(pt);
            if ids.last() != Some(&id) {
                ids.push(id);
            }
        }
        for w in ids.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            match edge_ids.get(&key) {
                Some(&e) => edge_sources[e].push(k),
                None => {
                    let e = edges.len();
                    edge_ids.insert(key, e);
                    edges.push(key);
                    edge_sources.push(vec![k]);
                }
            }
        }
    }
    let built = b.build();
    let verts: Vec<Point> = built.points().to_vec();
    let labels: BTreeMap<String, usize> = c
        .labels()
        .iter()
        .map(|(name, &i)| (name.clone(), point_map[i]))
        .collect();
    let lengths: Vec<f64> = edges.iter().map(|&(u, v)| verts[u].dist(verts[v])).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); verts.len()];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    EmbeddedGraph { verts, edges, lengths, labels, edge_sources, adj }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
    }
}

/// Connected components as sorted vertex classes, ordered by smallest member.
/// Isolated vertices form singleton classes.
pub fn arc_components(g: &EmbeddedGraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.n_verts());
    for &(u, v) in g.edges() {
        uf.union(u, v);
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n_verts() {
        let r = uf.find(v);
        classes.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// A simple path in an embedded graph with its total length and Euclidean
/// diameter, the latter recorded with an attaining vertex pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWitness {
    pub verts: Vec<usize>,
    pub length: f64,
    pub diam: f64,
    pub diam_pair: (usize, usize),
}

impl PathWitness {
    pub(crate) fn from_verts(g: &EmbeddedGraph, verts: Vec<usize>) -> PathWitness {
        let mut length = 0.0;
        for w in verts.windows(2) {
            length += g.dist(w[0], w[1]);
        }
        let mut diam = 0.0;
        let mut diam_pair = (verts[0], verts[0]);
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                let d = g.dist(verts[i], verts[j]);
                if d > diam {
                    diam = d;
                    diam_pair = (verts[i], verts[j]);
                }
            }
        }
        PathWitness { verts, length, diam, diam_pair }
    }

    /// The path's vertices as plane points.
    pub fn points(&self, g: &EmbeddedGraph) -> Vec<Point> {
        self.verts.iter().map(|&v| g.vert(v)).collect()
    }
}

/// Result of an arc-metric query: the min-diameter value (`+∞` across
/// components) and, when finite, a witness path attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaResult {
    pub value: f64,
    pub witness: Option<PathWitness>,
    pub expanded: u64,
}

fn check_vertex(g: &EmbeddedGraph, v: usize) -> Result<(), MetricError> {
    if v >= g.n_verts() {
        return Err(MetricError::VertexOutOfRange);
    }
    Ok(())
}

/// Exact arc-metric value with witness; branch-and-bound under the default
/// node budget.
pub fn delta(g: &EmbeddedGraph, x: usize, y: usize) -> Result<DeltaResult, MetricError> {
    delta_with_budget(g, x, y, DEFAULT_NODE_BUDGET)
}

/// [`delta`] with an explicit node-expansion budget.
pub fn delta_with_budget(
    g: &EmbeddedGraph,
    x: usize,
    y: usize,
    budget: u64,
) -> Result<DeltaResult, MetricError> {
    check_vertex(g, x)?;
    check_vertex(g, y)?;
    if x == y {
        return Ok(DeltaResult {
            value: 0.0,
            witness: Some(PathWitness::from_verts(g, vec![x])),
            expanded: 0,
        });
    }
    // Upper bound from the shortest path by length; also settles reachability.
    let (_, short) = dijkstra(g, x, Some(y));
    let Some(start) = short else {
        return Ok(DeltaResult { value: f64::INFINITY, witness: None, expanded: 0 });
    };
    let mut best = start.diam;
    let mut best_path = start.verts.clone();

    let n = g.n_verts();
    let mut on_path = vec![false; n];
    let mut path: Vec<usize> = vec![x];
    on_path[x] = true;
    let mut expanded: u64 = 0;

    struct Frame {
        v: usize,
        slot: usize,
        prev_diam: f64,
        prev_spread: f64,
    }
    let d_xy = g.dist(x, y);
    let mut stack = vec![Frame { v: x, slot: 0, prev_diam: 0.0, prev_spread: d_xy }];
    let mut cur_diam = 0.0; // diameter of the current path's vertex set
    let mut cur_spread = d_xy; // max distance from a path vertex to y

    while let Some(frame) = stack.last_mut() {
        let v = frame.v;
        let nbrs = g.neighbors(v);
        if frame.slot >= nbrs.len() {
            on_path[v] = false;
            path.pop();
            cur_diam = frame.prev_diam;
            cur_spread = frame.prev_spread;
            stack.pop();
            continue;
        }
        let (u, _) = nbrs[frame.slot];
        frame.slot += 1;
        if on_path[u] {
            continue;
        }
        expanded += 1;
        if expanded > budget {
            return Err(MetricError::BudgetExceeded { expanded });
        }
        let mut new_diam = cur_diam;
        for &w in &path {
            let d = g.dist(w, u);
            if d > new_diam {
                new_diam = d;
            }
        }
        let new_spread = cur_spread.max(g.dist(u, y));
        if u == y {
            if new_diam < best {
                best = new_diam;
                best_path = path.clone();
                best_path.push(y);
            }
            continue;
        }
        // Any completion contains y, so its diameter is at least the spread.
        if new_diam.max(new_spread) >= best {
            continue;
        }
        let prev_diam = cur_diam;
        let prev_spread = cur_spread;
        cur_diam = new_diam;
        cur_spread = new_spread;
        on_path[u] = true;
        path.push(u);
        stack.push(Frame { v: u, slot: 0, prev_diam, prev_spread });
    }

    let witness = PathWitness::from_verts(g, best_path);
    Ok(DeltaResult { value: witness.diam, witness: Some(witness), expanded })
}

/// Exhaustive enumeration of all simple `x`–`y` paths: the reference the
/// branch-and-bound is checked against. Restricted to small graphs.
pub fn delta_oracle(g: &EmbeddedGraph, x: usize, y: usize) -> Result<DeltaResult, MetricError> {
    if g.n_verts() > ORACLE_MAX_VERTICES {
        return Err(MetricError::OracleTooLarge { n: g.n_verts(), max: ORACLE_MAX_VERTICES });
    }
    check_vertex(g, x)?;
    check_vertex(g, y)?;
    if x == y {
        return Ok(DeltaResult {
            value: 0.0,
            witness: Some(PathWitness::from_verts(g, vec![x])),
            expanded: 0,
        });
    }

    fn rec(
        g: &EmbeddedGraph,
        y: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        best: &mut Option<PathWitness>,
        expanded: &mut u64,
    ) {
        let v = *path.last().unwrap();
        if v == y {
            let w = PathWitness::from_verts(g, path.clone());
            if best.as_ref().is_none_or(|b| w.diam < b.diam) {
                *best = Some(w);
            }
            return;
        }
        for &(u, _) in g.neighbors(v) {
            if on_path[u] {
                continue;
            }
            *expanded += 1;
            on_path[u] = true;
            path.push(u);
            rec(g, y, on_path, path, best, expanded);
            path.pop();
            on_path[u] = false;
        }
    }

    let mut best: Option<PathWitness> = None;
    let mut on_path = vec![false; g.n_verts()];
    let mut path = vec![x];
    on_path[x] = true;
    let mut expanded = 0u64;
    rec(g, y, &mut on_path, &mut path, &mut best, &mut expanded);
    match best {
        Some(w) => Ok(DeltaResult { value: w.diam, witness: Some(w), expanded }),
        None => Ok(DeltaResult { value: f64::INFINITY, witness: None, expanded }),
    }
}

/// Vertices at arc-metric distance strictly less than `r` from `x`.
pub fn delta_ball(g: &EmbeddedGraph, x: usize, r: f64) -> Result<Vec<usize>, MetricError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(MetricError::BadRadius);
    }
    check_vertex(g, x)?;
    let mut out = Vec::new();
    for v in 0..g.n_verts() {
        if delta(g, x, v)?.value < r {
            out.push(v);
        }
    }
    Ok(out)
}

/// Deterministic Dijkstra by total length over the whole component.
/// Distance ties are broken toward the smaller parent vertex, so the tree
/// and every witness built from it are independent of traversal order.
fn dijkstra_tree(g: &EmbeddedGraph, src: usize) -> (Vec<f64>, Vec<Option<usize>>) {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0).then(self.1.cmp(&o.1))
        }
    }

    let n = g.n_verts();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Entry(0.0, src)));
    while let Some(Reverse(Entry(_, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &(u, e) in g.neighbors(v) {
            if done[u] {
                continue;
            }
            let nd = dist[v] + g.edge_len(e);
            if nd < dist[u] || (nd == dist[u] && parent[u].is_some_and(|p| v < p)) {
                dist[u] = nd;
                parent[u] = Some(v);
                heap.push(Reverse(Entry(nd, u)));
            }
        }
    }
    (dist, parent)
}

fn tree_path(parent: &[Option<usize>], t: usize) -> Vec<usize> {
    let mut verts = vec![t];
    let mut cur = t;
    while let Some(p) = parent[cur] {
        verts.push(p);
        cur = p;
    }
    verts.reverse();
    verts
}

fn dijkstra(
    g: &EmbeddedGraph,
    src: usize,
    target: Option<usize>,
) -> (Vec<f64>, Option<PathWitness>) {
    let (dist, parent) = dijkstra_tree(g, src);
    let witness = target.and_then(|t| {
        if dist[t].is_infinite() {
            return None;
        }
        Some(PathWitness::from_verts(g, tree_path(&parent, t)))
    });
    (dist, witness)
}

/// Shortest path by total length with witness; `+∞` and no witness across
/// components.
pub fn min_path_length(
    g: &EmbeddedGraph,
    x: usize,
    y: usize,
) -> Result<(f64, Option<PathWitness>), MetricError> {
    check_vertex(g, x)?;
    check_vertex(g, y)?;
    if x == y {
        return Ok((0.0, Some(PathWitness::from_verts(g, vec![x]))));
    }
    let (dist, witness) = dijkstra(g, x, Some(y));
    Ok((dist[y], witness))
}

/// Shortest-path tree rooted at `a`: a simple path from `a` to every vertex
/// of its component, deterministic across runs.
pub fn star_lift(g: &EmbeddedGraph, a: usize) -> Result<BTreeMap<usize, PathWitness>, MetricError> {
    check_vertex(g, a)?;
    let (dist, parent) = dijkstra_tree(g, a);
    let mut out = BTreeMap::new();
    for v in 0..g.n_verts() {
        if dist[v].is_finite() {
            out.insert(v, PathWitness::from_verts(g, tree_path(&parent, v)));
        }
    }
    Ok(out)
}

/// Components of the relation "sample points closer than `eps`", with samples
/// at step `h` along every segment. Returns classes of the complex's point
/// indices.
pub fn eps_components(
    c: &PlanarComplex,
    eps: f64,
    h: f64,
) -> Result<Vec<Vec<usize>>, MetricError> {
    if !(eps > 0.0) || !(h > 0.0) || h > eps / 4.0 {
        return Err(MetricError::BadSampling);
    }
    let n_pts = c.points().len();
    let mut samples: Vec<Point> = c.points().to_vec();
    let mut uf = UnionFind::new(n_pts);
    for k in 0..c.segments().len() {
        let (u_idx, v_idx) = c.segments()[k];
        let (u, v) = c.seg_points(k);
        let n = (u.dist(v) / h).ceil().max(1.0) as usize;
        let mut prev = u_idx;
        for i in 1..=n {
            let id = if i == n {
                v_idx
            } else {
                samples.push(u.lerp(v, i as f64 / n as f64));
                uf.push()
            };
            uf.union(prev, id);
            prev = id;
        }
    }
    // Grid at cell size eps; link samples in neighboring cells closer than eps.
    let cell = eps;
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (i, p) in samples.iter().enumerate() {
        let key = ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
        grid.entry(key).or_default().push(i);
    }
    let keys: Vec<(i64, i64)> = grid.keys().copied().collect();
    for (cx, cy) in keys {
        let ids = grid[&(cx, cy)].clone();
        for (dx, dy) in [(0i64, 0i64), (1, 0), (0, 1), (1, 1), (1, -1)] {
            let other = match grid.get(&(cx + dx, cy + dy)) {
                Some(o) => o.clone(),
                None => continue,
            };
            for &i in &ids {
                for &j in &other {
                    if (dx, dy) == (0, 0) && j <= i {
                        continue;
                    }
                    if samples[i].dist(samples[j]) < eps {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n_pts {
        let r = uf.find(v);
        classes.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort_by_key(|c| c[0]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn graph_of(segs: &[((f64, f64), (f64, f64))]) -> EmbeddedGraph {
        let mut b = ComplexBuilder::new();
        for &((ax, ay), (bx, by)) in segs {
            b.segment(p(ax, ay), p(bx, by));
        }
        planarize(&b.build())
    }

    #[test]
    fn planarize_crossing_segments() {
        let g = graph_of(&[((0.0, 0.0), (2.0, 0.0)), ((1.0, -1.0), (1.0, 1.0))]);
        assert_eq!(g.n_verts(), 5);
        assert_eq!(g.n_edges(), 4);
    }

    #[test]
    fn planarize_embedded_is_stable() {
        let g1 = graph_of(&[((0.0, 0.0), (1.0, 0.0)), ((1.0, 0.0), (1.0, 1.0))]);
        assert_eq!((g1.n_verts(), g1.n_edges()), (3, 2));
        let mut b = ComplexBuilder::new();
        for &(u, v) in g1.edges() {
            b.segment(g1.vert(u), g1.vert(v));
        }
        let g2 = planarize(&b.build());
        assert_eq!((g2.n_verts(), g2.n_edges()), (3, 2));
    }

    #[test]
    fn planarize_merges_collinear_overlap() {
        let g = graph_of(&[((0.0, 0.0), (2.0, 0.0)), ((1.0, 0.0), (3.0, 0.0))]);
        assert_eq!(g.n_verts(), 4);
        assert_eq!(g.n_edges(), 3);
        assert!(
            (0..g.n_edges()).any(|e| g.edge_sources(e).len() == 2),
            "the middle edge belongs to both inputs"
        );
    }

    #[test]
    fn components_and_empty_graph() {
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (0.5, 1.0)),
            ((0.5, 1.0), (0.0, 0.0)),
            ((5.0, 5.0), (6.0, 5.0)),
            ((6.0, 5.0), (5.5, 6.0)),
            ((5.5, 6.0), (5.0, 5.0)),
        ]);
        assert_eq!(arc_components(&g).len(), 2);
        let empty = planarize(&PlanarComplex::empty());
        assert!(arc_components(&empty).is_empty());
    }

    #[test]
    fn delta_single_edge_and_disconnected() {
        let g = graph_of(&[((0.0, 0.0), (3.0, 0.0)), ((10.0, 0.0), (11.0, 0.0))]);
        let x = g.vertex_near(p(0.0, 0.0)).unwrap();
        let y = g.vertex_near(p(3.0, 0.0)).unwrap();
        let r = delta(&g, x, y).unwrap();
        assert_eq!(r.value, 3.0);
        assert_eq!(r.witness.as_ref().unwrap().verts.len(), 2);

        let z = g.vertex_near(p(10.0, 0.0)).unwrap();
        let r2 = delta(&g, x, z).unwrap();
        assert!(r2.value.is_infinite());
        assert!(r2.witness.is_none());
    }

    #[test]
    fn delta_prefers_low_diameter_route() {
        // two routes from (0,0) to (2,0): flat through (1,0), detour via (1,2)
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (2.0, 0.0)),
            ((0.0, 0.0), (1.0, 2.0)),
            ((1.0, 2.0), (2.0, 0.0)),
        ]);
        let x = g.vertex_near(p(0.0, 0.0)).unwrap();
        let y = g.vertex_near(p(2.0, 0.0)).unwrap();
        let r = delta(&g, x, y).unwrap();
        assert_eq!(r.value, 2.0);
        let w = r.witness.unwrap();
        assert!(w.verts.contains(&g.vertex_near(p(1.0, 0.0)).unwrap()));
        let o = delta_oracle(&g, x, y).unwrap();
        assert_eq!(o.value, r.value);
        assert_eq!(o.witness.unwrap().diam, w.diam);
    }

    #[test]
    fn delta_same_vertex() {
        let g = graph_of(&[((0.0, 0.0), (1.0, 0.0))]);
        let x = g.vertex_near(p(0.0, 0.0)).unwrap();
        let r = delta(&g, x, x).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.witness.unwrap().verts, vec![x]);
    }

    #[test]
    fn delta_oracle_size_guard() {
        let mut segs = Vec::new();
        for i in 0..20 {
            segs.push(((i as f64, 0.0), (i as f64 + 1.0, 0.0)));
        }
        let g = graph_of(&segs);
        assert!(matches!(delta_oracle(&g, 0, 1), Err(MetricError::OracleTooLarge { .. })));
    }

    #[test]
    fn delta_ball_on_path_graph() {
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (2.0, 0.0)),
            ((2.0, 0.0), (3.0, 0.0)),
        ]);
        let x = g.vertex_near(p(0.0, 0.0)).unwrap();
        let mut ball = delta_ball(&g, x, 1.5).unwrap();
        ball.sort_unstable();
        let mut want = vec![x, g.vertex_near(p(1.0, 0.0)).unwrap()];
        want.sort_unstable();
        assert_eq!(ball, want);

        // every neighbor sits at unit distance: a smaller radius leaves x alone
        assert_eq!(delta_ball(&g, x, 0.5).unwrap(), vec![x]);

        let all = delta_ball(&g, x, 4.0).unwrap();
        assert_eq!(all.len(), g.n_verts());
    }

    #[test]
    fn min_path_square_corners() {
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (1.0, 1.0)),
            ((1.0, 1.0), (0.0, 1.0)),
            ((0.0, 1.0), (0.0, 0.0)),
        ]);
        let x = g.vertex_near(p(0.0, 0.0)).unwrap();
        let y = g.vertex_near(p(1.0, 1.0)).unwrap();
        let (len, w) = min_path_length(&g, x, y).unwrap();
        assert!((len - 2.0).abs() < 1e-12);
        assert!(w.is_some());
    }

    #[test]
    fn star_lift_star_and_cycle() {
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((0.0, 0.0), (0.0, 1.0)),
            ((0.0, 0.0), (-1.0, 0.0)),
        ]);
        let a = g.vertex_near(p(0.0, 0.0)).unwrap();
        let lift = star_lift(&g, a).unwrap();
        assert_eq!(lift.len(), 4);
        assert_eq!(lift[&a].verts, vec![a]);
        for (&v, w) in &lift {
            if v != a {
                assert_eq!(w.verts.len(), 2);
            }
        }

        // square cycle: opposite corner tie broken toward the smaller parent
        let g = graph_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (1.0, 1.0)),
            ((1.0, 1.0), (0.0, 1.0)),
            ((0.0, 1.0), (0.0, 0.0)),
        ]);
        let a = g.vertex_near(p(0.0, 0.0)).unwrap();
        let far = g.vertex_near(p(1.0, 1.0)).unwrap();
        let lift1 = star_lift(&g, a).unwrap();
        let lift2 = star_lift(&g, a).unwrap();
        assert_eq!(lift1[&far].verts, lift2[&far].verts);
        let mid = lift1[&far].verts[1];
        let east = g.vertex_near(p(1.0, 0.0)).unwrap();
        let north = g.vertex_near(p(0.0, 1.0)).unwrap();
        assert_eq!(mid, east.min(north));
    }

    #[test]
    fn eps_components_parallel_segments() {
        let mut b = ComplexBuilder::new();
        b.segment(p(0.0, 0.0), p(1.0, 0.0));
        b.segment(p(0.0, 0.5), p(1.0, 0.5));
        let c = b.build();
        assert_eq!(eps_components(&c, 0.6, 0.1).unwrap().len(), 1);
        assert_eq!(eps_components(&c, 0.4, 0.1).unwrap().len(), 2);
        assert!(matches!(eps_components(&c, 0.4, 0.2), Err(MetricError::BadSampling)));
    }
}
