//! On-disk formats: geometry documents (JSON), tree files (plain text), and
//! SVG rendering.
//!
//! Geometry documents round-trip bit-exactly: coordinates are serialized as
//! shortest round-trip decimals of the underlying 64-bit floats, collections
//! keep insertion order, and labels are sorted, so identical inputs produce
//! byte-identical files.
//!
//! Tree files are line oriented: one node per line as whitespace-separated
//! child indices, a trailing `!` marking the node. An empty file is the
//! root-only tree; ancestors are filled in on load.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::Node;
use crate::geometry::{GeometryError, PlanarComplex, Point};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("unsupported document version {0:?} (expected \"1\")")]
    Version(String),
    #[error("document index out of range")]
    BadIndex,
    #[error("invalid geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("tree file line {line}: {msg}")]
    TreeParse { line: usize, msg: String },
}

/// Generator provenance stored in a document.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DocMetadata {
    pub generator: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    /// Node keys whose towers carry a bridge.
    #[serde(default)]
    pub bridges: Vec<String>,
}

/// Serialized form of a [`PlanarComplex`] plus provenance. Version is "1".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryDocument {
    pub version: String,
    pub points: Vec<[f64; 2]>,
    pub segments: Vec<[usize; 2]>,
    pub labels: BTreeMap<String, usize>,
    pub metadata: DocMetadata,
}

impl GeometryDocument {
    pub fn from_complex(c: &PlanarComplex, metadata: DocMetadata) -> GeometryDocument {
        GeometryDocument {
            version: "1".to_string(),
            points: c.points().iter().map(|p| [p.x, p.y]).collect(),
            segments: c.segments().iter().map(|&(i, j)| [i, j]).collect(),
            labels: c.labels().clone(),
            metadata,
        }
    }

    pub fn to_complex(&self) -> Result<PlanarComplex, IoError> {
        if self.version != "1" {
            return Err(IoError::Version(self.version.clone()));
        }
        let points: Vec<Point> = self.points.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let segments: Vec<(usize, usize)> = self.segments.iter().map(|&[i, j]| (i, j)).collect();
        Ok(PlanarComplex::new(points, segments, self.labels.clone())?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<GeometryDocument, IoError> {
        let doc: GeometryDocument = serde_json::from_str(text)?;
        if doc.version != "1" {
            return Err(IoError::Version(doc.version));
        }
        if doc.segments.iter().any(|&[i, j]| i >= doc.points.len() || j >= doc.points.len()) {
            return Err(IoError::BadIndex);
        }
        if doc.labels.values().any(|&i| i >= doc.points.len()) {
            return Err(IoError::BadIndex);
        }
        Ok(doc)
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<GeometryDocument, IoError> {
        let text = std::fs::read_to_string(path)?;
        GeometryDocument::from_json(&text)
    }
}

/// Parsed tree file: the nodes exactly as listed, their prefix closure
/// (root included), and the `!`-marked subset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeFile {
    /// Nodes as written, one per line, no ancestors added.
    pub listed: BTreeSet<Node>,
    /// Prefix closure of the listed nodes; always contains the root.
    pub nodes: BTreeSet<Node>,
    pub marked: BTreeSet<Node>,
}

/// Parse a line-oriented node list. Each line holds whitespace-separated
/// nonnegative integers naming a node; a trailing `!` marks it. A line that
/// is only `!` marks the root.
pub fn parse_tree_file(text: &str) -> Result<TreeFile, IoError> {
    let mut listed: BTreeSet<Node> = BTreeSet::new();
    let mut nodes: BTreeSet<Node> = BTreeSet::new();
    let mut marked: BTreeSet<Node> = BTreeSet::new();
    nodes.insert(Vec::new());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (body, flag) = match line.strip_suffix('!') {
            Some(rest) => (rest.trim(), true),
            None => (line, false),
        };
        let mut node: Node = Vec::new();
        for tok in body.split_whitespace() {
            let n: u32 = tok.parse().map_err(|_| IoError::TreeParse {
                line: lineno + 1,
                msg: format!("expected a nonnegative integer, got {tok:?}"),
            })?;
            node.push(n);
        }
        for k in 1..=node.len() {
            nodes.insert(node[..k].to_vec());
        }
        listed.insert(node.clone());
        if flag {
            marked.insert(node);
        }
    }
    Ok(TreeFile { listed, nodes, marked })
}

/// Render a document as a standalone SVG. The viewBox is the unit square
/// with the y-axis flipped so that `(0, 1)` draws at the top-left corner;
/// one path element per segment, labeled points as circles carrying a
/// `<title>` with the label name. Output bytes are deterministic.
pub fn render_svg(doc: &GeometryDocument, stroke: f64) -> String {
    let flip = |y: f64| 1.0 - y;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" \
         width=\"640\" height=\"640\">\n",
    );
    for &[i, j] in &doc.segments {
        let [x1, y1] = doc.points[i];
        let [x2, y2] = doc.points[j];
        out.push_str(&format!(
            "  <path d=\"M {} {} L {} {}\" stroke=\"black\" stroke-width=\"{}\" \
             fill=\"none\" stroke-linecap=\"round\"/>\n",
            x1,
            flip(y1),
            x2,
            flip(y2),
            stroke
        ));
    }
    for (name, &i) in &doc.labels {
        let [x, y] = doc.points[i];
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"crimson\"><title>{}</title></circle>\n",
            x,
            flip(y),
            stroke * 2.0,
            name
        ));
    }
    out.push_str("</svg>\n");
    out
}
