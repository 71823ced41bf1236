//! Tree-indexed generators for the pathological planar compacta studied
//! here, truncated to finite depth and zigzag resolution.
//!
//! The coordinate skeleton is a nested interval scheme: `a_n = 1 - 3/4^(n+1)`
//! and `b_n = 1 - 2/4^(n+1)` interleave strictly inside `(0, 1)` with
//! supremum 1, and each node `s` rescales the base sequences into its own
//! interval `[a_s, b_s]` by the affine map onto that interval. All these
//! values are dyadic, hence exact in 64-bit floats at the supported depths,
//! and exact rational evaluation is available for auditing.
//!
//! On top of the scheme:
//! - `becker_r` / `becker_set`: a zigzag tower per tree node over a bottom
//!   and right edge; without bridges the union has exactly two connectivity
//!   classes, and a bridge segment (the finite stand-in for the limit
//!   connection along an infinite branch) joins them.
//! - `comb_p`: the comb whose teeth force any path from the root anchor to
//!   a deep spike to descend one long vertical per level.
//! - `shortcut` / `psi`: a scaled tower spliced into the open rectangle
//!   between two consecutive comb levels, with two vertical connectors;
//!   bridged towers let paths skip a descent.
//! - `reduction_phi`: bridges chosen from a boolean table per node, after
//!   regularization (a node stays unbridged only while the table holds along
//!   its whole ancestry).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::geometry::{affine_apply, AffineMap, ComplexBuilder, PlanarComplex, Point};
use crate::triods::Rational;
use num_traits::One;

/// Maximum supported tree depth.
pub const MAX_DEPTH: usize = 6;
/// Maximum supported zigzag resolution / child index.
pub const MAX_ZIGZAG: usize = 8;
/// Height of a comb descent; the comb levels accumulate at this value.
pub const THETA: f64 = 2.0 / 3.0;

/// A tree node: a finite sequence of child indices. The root is the empty
/// sequence.
pub type Node = Vec<u32>;

/// Stable textual key for a node: `root`, `0`, `0_2_1`, ...
pub fn node_key(s: &[u32]) -> String {
    if s.is_empty() {
        "root".to_string()
    } else {
        s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("_")
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("depth {got} beyond cap {max}")]
    DepthCap { got: usize, max: usize },
    #[error("zigzag {got} beyond cap {max}")]
    ZigzagCap { got: usize, max: usize },
    #[error("node {0} lies beyond the declared caps")]
    NodeBeyondCaps(String),
    #[error("bridge flag on a node absent from the tree: {0}")]
    BridgeOnAbsentNode(String),
    #[error("shortcuts exist only at depth >= 1")]
    ShortcutAtRoot,
    #[error("connector at {0} misses its target level")]
    ConnectorMiss(String),
}

/// The interval scheme underlying every generator. `a_n` and `b_n` are
/// `1 - a_coeff/base^(n+1)` and `1 - b_coeff/base^(n+1)`; nested values come
/// from rescaling into `[a_s, b_s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorScheme {
    pub a_coeff: i128,
    pub b_coeff: i128,
    pub base: i128,
}

impl CantorScheme {
    pub fn standard() -> CantorScheme {
        CantorScheme { a_coeff: 3, b_coeff: 2, base: 4 }
    }

    /// Supremum of the base interval lengths: `1/base`.
    pub fn rho(&self) -> f64 {
        1.0 / self.base as f64
    }

    pub fn a_n(&self, n: u32) -> f64 {
        1.0 - self.a_coeff as f64 / (self.base as f64).powi(n as i32 + 1)
    }

    pub fn b_n(&self, n: u32) -> f64 {
        1.0 - self.b_coeff as f64 / (self.base as f64).powi(n as i32 + 1)
    }

    /// Interval `[a_s, b_s]` of a node, by rescaling level by level.
    pub fn endpoints(&self, s: &[u32]) -> (f64, f64) {
        let mut a = 0.0f64;
        let mut b = 1.0f64;
        for &n in s {
            let w = b - a;
            let (an, bn) = (self.a_n(n), self.b_n(n));
            b = a + bn * w;
            a += an * w;
        }
        (a, b)
    }

    /// Exact rational endpoints; overflows nothing at the supported caps.
    pub fn endpoints_exact(&self, s: &[u32]) -> (Rational, Rational) {
        let mut a = Rational::new(0, 1);
        let mut b = Rational::one();
        for &n in s {
            let den = self.base.pow(n + 1);
            let an = Rational::new(den - self.a_coeff, den);
            let bn = Rational::new(den - self.b_coeff, den);
            let w = b - a;
            b = a + bn * w;
            a += an * w;
        }
        (a, b)
    }

    /// Box height of a node's tower: `2^-|s|`.
    pub fn box_height(&self, s: &[u32]) -> f64 {
        0.5f64.powi(s.len() as i32)
    }

    /// Affine map sending the unit square onto the node's box
    /// `[a_s, b_s] x [0, 2^-|s|]`.
    pub fn box_map(&self, s: &[u32]) -> AffineMap {
        let (a, b) = self.endpoints(s);
        AffineMap::diag(b - a, self.box_height(s), a, 0.0)
    }
}

/// `(a_s, b_s)` of the standard scheme.
pub fn cantor_endpoints(s: &[u32]) -> (f64, f64) {
    CantorScheme::standard().endpoints(s)
}

/// Comb level height: decreasing, `alpha(0) = 1`, limit [`THETA`]. The
/// closed form `(2*4^k + 1) / (3*4^k)` is dyadic and exact in floats.
pub fn alpha(k: usize) -> f64 {
    let pow = 1u128 << (2 * k);
    let num = (2 * pow + 1) / 3;
    num as f64 / pow as f64
}

/// Depth, zigzag resolution, and bridge flags of a truncated build.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationParams {
    pub depth: usize,
    pub zigzag: usize,
    pub bridges: BTreeSet<Node>,
}

impl TruncationParams {
    pub fn new(depth: usize, zigzag: usize) -> Result<TruncationParams, BuildError> {
        if depth > MAX_DEPTH {
            return Err(BuildError::DepthCap { got: depth, max: MAX_DEPTH });
        }
        if zigzag > MAX_ZIGZAG || zigzag == 0 {
            return Err(BuildError::ZigzagCap { got: zigzag, max: MAX_ZIGZAG });
        }
        Ok(TruncationParams { depth, zigzag, bridges: BTreeSet::new() })
    }

    pub fn with_bridges<I: IntoIterator<Item = Node>>(mut self, it: I) -> TruncationParams {
        self.bridges.extend(it);
        self
    }

    pub fn bridged(&self, s: &[u32]) -> bool {
        self.bridges.contains(s)
    }

    pub fn check_node(&self, s: &[u32]) -> Result<(), BuildError> {
        if s.len() > self.depth || s.iter().any(|&n| n as usize > self.zigzag) {
            return Err(BuildError::NodeBeyondCaps(node_key(s)));
        }
        Ok(())
    }
}

/// A finite prefix-closed set of nodes containing the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    nodes: BTreeSet<Node>,
}

impl FiniteTree {
    pub fn root_only() -> FiniteTree {
        let mut nodes = BTreeSet::new();
        nodes.insert(Vec::new());
        FiniteTree { nodes }
    }

    /// Prefix closure of the given nodes, always containing the root.
    pub fn from_nodes<I: IntoIterator<Item = Node>>(it: I) -> FiniteTree {
        let mut nodes = BTreeSet::new();
        nodes.insert(Vec::new());
        for node in it {
            for k in 1..=node.len() {
                nodes.insert(node[..k].to_vec());
            }
        }
        FiniteTree { nodes }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the root is always present
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.nodes.contains(s)
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.len()).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> u32 {
        self.nodes.iter().flat_map(|n| n.iter().copied()).max().unwrap_or(0)
    }

    /// Nodes with no child present.
    pub fn leaves(&self) -> Vec<Node> {
        self.nodes
            .iter()
            .filter(|n| {
                !self.nodes.iter().any(|m| m.len() == n.len() + 1 && m.starts_with(n))
            })
            .cloned()
            .collect()
    }
}

/// One zigzag tower: bottom edge, right edge, entry segment from the top
/// anchor, and `zigzag + 1` teeth rising to the box ceiling. Labels mark the
/// anchor (`a_hat_*`), the corner `(b_s, 0)` (`corner_*`), and every tooth
/// vertex (`a_hat_*` lows, `b_hat_*` tops, named after the child nodes).
pub fn becker_r(s: &[u32], zigzag: usize) -> PlanarComplex {
    let scheme = CantorScheme::standard();
    let (a_s, b_s) = scheme.endpoints(s);
    let h = scheme.box_height(s);
    let child = |n: u32| -> Node {
        let mut c = s.to_vec();
        c.push(n);
        c
    };
    let mut b = ComplexBuilder::new();
    b.segment(Point::new(a_s, 0.0), Point::new(b_s, 0.0));
    b.segment(Point::new(b_s, 0.0), Point::new(b_s, h));
    let anchor = Point::new(a_s, h);
    let low = |n: u32| {
        let (ac, _) = scheme.endpoints(&child(n));
        Point::new(ac, h / 2.0)
    };
    let top = |n: u32| {
        let (_, bc) = scheme.endpoints(&child(n));
        Point::new(bc, h)
    };
    b.segment(anchor, low(0));
    for n in 0..=zigzag as u32 {
        b.segment(low(n), top(n));
        if (n as usize) < zigzag {
            b.segment(top(n), low(n + 1));
        }
    }
    b.label(&format!("a_hat_{}", node_key(s)), anchor);
    b.label(&format!("corner_{}", node_key(s)), Point::new(b_s, 0.0));
    for n in 0..=zigzag as u32 {
        b.label(&format!("a_hat_{}", node_key(&child(n))), low(n));
        b.label(&format!("b_hat_{}", node_key(&child(n))), top(n));
    }
    b.build()
}

/// Union of one tower per tree node. A bridged node gets one extra vertical
/// segment dropping from its last tooth top to the bottom edge, which joins
/// the tower side of the set to the edge side.
pub fn becker_set(t: &FiniteTree, p: &TruncationParams) -> Result<PlanarComplex, BuildError> {
    let scheme = CantorScheme::standard();
    for node in t.nodes() {
        p.check_node(node)?;
    }
    for flag in &p.bridges {
        if !t.contains(flag) {
            return Err(BuildError::BridgeOnAbsentNode(node_key(flag)));
        }
    }
    let mut parts: Vec<PlanarComplex> = Vec::new();
    for node in t.nodes() {
        parts.push(becker_r(node, p.zigzag));
        if p.bridged(node) {
            let mut last = node.clone();
            last.push(p.zigzag as u32);
            let (_, b_last) = scheme.endpoints(&last);
            let h = scheme.box_height(node);
            let mut bb = ComplexBuilder::new();
            bb.segment(Point::new(b_last, h), Point::new(b_last, 0.0));
            bb.label(&format!("bridge_{}", node_key(node)), Point::new(b_last, h));
            parts.push(bb.build());
        }
    }
    let refs: Vec<&PlanarComplex> = parts.iter().collect();
    Ok(PlanarComplex::merge(&refs))
}

/// The comb: per node, a long vertical descent, a slant back up to the next
/// level, the level's horizontal, and a spike dropping to the x-axis.
pub fn comb_p(depth: usize, zigzag: usize) -> Result<PlanarComplex, BuildError> {
    let params = TruncationParams::new(depth, zigzag)?;
    let scheme = CantorScheme::standard();
    let mut parts: Vec<PlanarComplex> = Vec::new();
    let mut stack: Vec<Node> = vec![Vec::new()];
    let mut nodes: Vec<Node> = Vec::new();
    while let Some(s) = stack.pop() {
        nodes.push(s.clone());
        if s.len() < params.depth {
            for n in (0..=params.zigzag as u32).rev() {
                let mut c = s.clone();
                c.push(n);
                stack.push(c);
            }
        }
    }
    nodes.sort();
    for s in &nodes {
        let k = s.len();
        let (a_s, b_s) = scheme.endpoints(s);
        let mut c0 = s.clone();
        c0.push(0);
        let (a_child0, _) = scheme.endpoints(&c0);
        let a_hat = Point::new(a_s, alpha(k));
        let c_hat = Point::new(a_s, alpha(k) - THETA);
        let child_anchor = Point::new(a_child0, alpha(k + 1));
        let b_hat = Point::new(b_s, alpha(k + 1));
        let mut b = ComplexBuilder::new();
        b.segment(a_hat, c_hat);
        b.segment(c_hat, child_anchor);
        b.segment(child_anchor, b_hat);
        b.segment(b_hat, Point::new(b_s, 0.0));
        b.label(&format!("a_hat_{}", node_key(s)), a_hat);
        b.label(&format!("c_hat_{}", node_key(s)), c_hat);
        b.label(&format!("b_hat_{}", node_key(s)), b_hat);
        parts.push(b.build());
    }
    let refs: Vec<&PlanarComplex> = parts.iter().collect();
    Ok(PlanarComplex::merge(&refs))
}

/// The tower spliced into one shortcut, with its own bridge flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortcutSpec {
    pub tree: FiniteTree,
    pub bridges: BTreeSet<Node>,
}

impl ShortcutSpec {
    /// A root-only tower, bridged or not.
    pub fn simple(bridged: bool) -> ShortcutSpec {
        let mut bridges = BTreeSet::new();
        if bridged {
            bridges.insert(Vec::new());
        }
        ShortcutSpec { tree: FiniteTree::root_only(), bridges }
    }
}

fn relabel(c: &PlanarComplex, prefix: &str) -> PlanarComplex {
    let labels: BTreeMap<String, usize> = c
        .labels()
        .iter()
        .map(|(name, &i)| (format!("{prefix}{name}"), i))
        .collect();
    PlanarComplex::new(c.points().to_vec(), c.segments().to_vec(), labels)
        .expect("relabeling preserves validity")
}

/// Shortcut gadget at node `s` (depth >= 1): a square centered in the open
/// rectangle between level `|s|` and level `|s|-1` over `(a_{s.0}, b_s)`,
/// holding a scaled tower, plus two vertical connectors tying the square's
/// top-left corner to the upper level and its bottom-right corner to the
/// lower one.
pub fn shortcut(
    s: &[u32],
    spec: &ShortcutSpec,
    params: &TruncationParams,
) -> Result<PlanarComplex, BuildError> {
    if s.is_empty() {
        return Err(BuildError::ShortcutAtRoot);
    }
    params.check_node(s)?;
    let scheme = CantorScheme::standard();
    let k = s.len();
    let (_, b_s) = scheme.endpoints(s);
    let mut c0 = s.to_vec();
    c0.push(0);
    let (a_child0, _) = scheme.endpoints(&c0);
    let w = b_s - a_child0;
    let h = alpha(k) - alpha(k + 1);
    let side = w.min(h) / 2.0;
    let cx = (a_child0 + b_s) / 2.0;
    let cy = (alpha(k + 1) + alpha(k)) / 2.0;
    let q0 = Point::new(cx - side / 2.0, cy - side / 2.0);

    let inner_params = TruncationParams {
        depth: params.depth,
        zigzag: params.zigzag,
        bridges: spec.bridges.clone(),
    };
    let inner = becker_set(&spec.tree, &inner_params)?;
    let map = AffineMap::homothety(side, q0);
    let key = node_key(s);
    let inner_img = relabel(&affine_apply(&map, &inner), &format!("sc_{key}__"));

    let top_corner = map.apply(Point::new(0.0, 1.0));
    let bottom_corner = map.apply(Point::new(1.0, 0.0));
    // the upper connector must land on the parent level's horizontal
    let parent = &s[..k - 1];
    let (_, b_parent) = scheme.endpoints(parent);
    let mut p0 = parent.to_vec();
    p0.push(0);
    let (a_parent0, _) = scheme.endpoints(&p0);
    if !(top_corner.x >= a_parent0 && top_corner.x <= b_parent) {
        return Err(BuildError::ConnectorMiss(key));
    }
    if !(bottom_corner.x >= a_child0 && bottom_corner.x <= b_s) {
        return Err(BuildError::ConnectorMiss(key));
    }
    let mut b = ComplexBuilder::new();
    b.segment(top_corner, Point::new(top_corner.x, alpha(k)));
    b.segment(bottom_corner, Point::new(bottom_corner.x, alpha(k + 1)));
    b.label(&format!("sc_{key}_top"), Point::new(top_corner.x, alpha(k)));
    b.label(&format!("sc_{key}_bottom"), Point::new(bottom_corner.x, alpha(k + 1)));
    let connectors = b.build();
    Ok(PlanarComplex::merge(&[&inner_img, &connectors]))
}

/// Per-node shortcut assignment for [`psi`].
pub type ShortcutAssignment = BTreeMap<Node, ShortcutSpec>;

/// The comb together with one shortcut gadget per assigned node.
pub fn psi(
    assignment: &ShortcutAssignment,
    params: &TruncationParams,
) -> Result<PlanarComplex, BuildError> {
    let comb = comb_p(params.depth, params.zigzag)?;
    let mut parts: Vec<PlanarComplex> = vec![comb];
    for (node, spec) in assignment {
        parts.push(shortcut(node, spec, params)?);
    }
    let refs: Vec<&PlanarComplex> = parts.iter().collect();
    Ok(PlanarComplex::merge(&refs))
}

/// Truth table for the reduction: `table[s]` stands for the membership test
/// at node `s`; missing nodes count as false.
pub type SchemeTable = BTreeMap<Node, bool>;

/// Every shortcut-bearing node within the caps, in order.
pub fn shortcut_universe(params: &TruncationParams) -> Vec<Node> {
    let mut out = Vec::new();
    let mut stack: Vec<Node> = vec![Vec::new()];
    while let Some(s) = stack.pop() {
        if !s.is_empty() {
            out.push(s.clone());
        }
        if s.len() < params.depth {
            for n in (0..=params.zigzag as u32).rev() {
                let mut c = s.clone();
                c.push(n);
                stack.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Regularized table: a node is marked iff the raw table holds at it and at
/// every ancestor down from depth one. Consequently the unmarked region is
/// closed under descent, and applying the operation twice changes nothing.
pub fn regularize(table: &SchemeTable, params: &TruncationParams) -> BTreeMap<Node, bool> {
    let mut out = BTreeMap::new();
    for s in shortcut_universe(params) {
        let ok = (1..=s.len()).all(|k| table.get(&s[..k].to_vec()).copied().unwrap_or(false));
        out.insert(s, ok);
    }
    out
}

/// The comb with a shortcut at every node in the universe; a node's tower is
/// bridged exactly when the regularized table is false there. A table that
/// holds along a whole branch keeps that branch's shortcuts unbridged, so
/// reaching its spikes still costs one full descent per level.
pub fn reduction_phi(
    table: &SchemeTable,
    params: &TruncationParams,
) -> Result<PlanarComplex, BuildError> {
    for node in table.keys() {
        params.check_node(node)?;
        if node.is_empty() {
            return Err(BuildError::NodeBeyondCaps(node_key(node)));
        }
    }
    let reg = regularize(table, params);
    let mut assignment = ShortcutAssignment::new();
    for (node, marked) in reg {
        assignment.insert(node, ShortcutSpec::simple(!marked));
    }
    psi(&assignment, params)
}
