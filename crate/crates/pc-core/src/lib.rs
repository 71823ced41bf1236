//! Finite-resolution models of arc-connected planar compacta: polygonal arcs
//! with a partial join operation, the arc pseudo-metric as a min-diameter path
//! search on embedded graphs, simple triods and rational circular traps, and
//! tree-indexed generators (zigzag towers, combs, shortcut splices).
//!
//! Everything works on 64-bit floats with a single absolute identification
//! tolerance, [`geometry::TOL`]. All operations are pure functions over
//! immutable values.

pub mod arc_algebra;
pub mod arc_metric;
pub mod constructions;
pub mod geometry;
pub mod io;
pub mod triods;

pub use arc_algebra::{ArcPosition, ConvergenceCertificate, OrientedPolyArc, Subdivision};
pub use arc_metric::{DeltaResult, EmbeddedGraph, PathWitness};
pub use geometry::{AffineMap, PlanarComplex, Point, PolyArc, SegIntersection, Segment, TOL};
pub use triods::{Disk, SimpleTriod, TriodTrap};
