//! `pc`: generate tree-indexed planar figures, query the arc metric, check
//! triod traps, count components, and render SVG.
//!
//! Exit codes: 0 success; 2 usage or format error; 3 semantic "no finite
//! answer" outcomes (disconnected endpoints, exhausted search budget,
//! degenerate trap request); 4 internal invariant violations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pc_core::arc_metric::{
    arc_components, delta_with_budget, eps_components, planarize, EmbeddedGraph, MetricError,
    DEFAULT_NODE_BUDGET,
};
use pc_core::constructions::{
    becker_set, comb_p, node_key, reduction_phi, psi, FiniteTree, Node, SchemeTable,
    ShortcutAssignment, ShortcutSpec, TruncationParams,
};
use pc_core::io::{parse_tree_file, render_svg, DocMetadata, GeometryDocument};
use pc_core::triods::{detect_triods, find_rational_trap, is_compatible, is_weakly_compatible, moore_intersect, TriodError};
use pc_core::{PlanarComplex, Point};

const EXIT_USAGE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "pc", version, about = "planar arc-connectivity toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Becker,
    Comb,
    Psi,
    Phi,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a geometry document
    Gen {
        kind: GenKind,
        /// Tree file (becker): nodes one per line, `!` suffix = bridge
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Assignment file (psi: shortcut nodes, `!` = bridged tower;
        /// phi: nodes where the scheme table holds)
        #[arg(long)]
        assign: Option<PathBuf>,
        /// Depth cap
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Zigzag resolution / max child index
        #[arg(long, default_value_t = 2)]
        zigzag: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Min-diameter arc query between two labels or coordinates
    Delta {
        input: PathBuf,
        /// Label name or `x,y`
        #[arg(long)]
        from: String,
        /// Label name or `x,y`
        #[arg(long)]
        to: String,
    },
    /// List canonical triods
    Triods { input: PathBuf },
    /// Emit one rational trap per triod and verify weak compatibility
    TrapCheck {
        input: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Component count, exact or eps-chain
    Components {
        input: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Render a document to SVG
    Svg {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.003)]
        stroke: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Gen { kind, tree, assign, depth, zigzag, out } => {
            cmd_gen(kind, tree.as_deref(), assign.as_deref(), depth, zigzag, &out)
        }
        Cmd::Delta { input, from, to } => cmd_delta(&input, &from, &to),
        Cmd::Triods { input } => cmd_triods(&input),
        Cmd::TrapCheck { input, eps } => cmd_trap_check(&input, eps),
        Cmd::Components { input, eps } => cmd_components(&input, eps),
        Cmd::Svg { input, out, stroke } => cmd_svg(&input, &out, stroke),
    }
}

fn load_complex(path: &Path) -> Result<(GeometryDocument, PlanarComplex), String> {
    let doc = GeometryDocument::load(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let complex = doc.to_complex().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((doc, complex))
}

fn node_list(nodes: &[Node]) -> String {
    nodes.iter().map(|n| node_key(n)).collect::<Vec<_>>().join(",")
}

fn cmd_gen(
    kind: GenKind,
    tree: Option<&Path>,
    assign: Option<&Path>,
    depth: usize,
    zigzag: usize,
    out: &Path,
) -> Result<ExitCode, String> {
    let params = TruncationParams::new(depth, zigzag).map_err(|e| e.to_string())?;
    let mut params_meta: BTreeMap<String, String> = BTreeMap::from([
        ("depth".to_string(), depth.to_string()),
        ("zigzag".to_string(), zigzag.to_string()),
    ]);
    let mut bridges: Vec<String> = Vec::new();
    let (name, complex) = match kind {
        GenKind::Becker => {
            let tf = match tree {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    parse_tree_file(&text).map_err(|e| e.to_string())?
                }
                None => Default::default(),
            };
            let t = FiniteTree::from_nodes(tf.nodes.iter().cloned());
            let p = params.clone().with_bridges(tf.marked.iter().cloned());
            bridges = tf.marked.iter().map(|n| node_key(n)).collect();
            ("becker", becker_set(&t, &p).map_err(|e| e.to_string())?)
        }
        GenKind::Comb => ("comb", comb_p(depth, zigzag).map_err(|e| e.to_string())?),
        GenKind::Psi => {
            let path = assign.ok_or("psi requires --assign FILE")?;
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let tf = parse_tree_file(&text).map_err(|e| e.to_string())?;
            let mut assignment = ShortcutAssignment::new();
            let mut shortcut_nodes: Vec<Node> = Vec::new();
            for node in &tf.listed {
                if node.is_empty() {
                    return Err("psi: the root carries no shortcut".to_string());
                }
                let bridged = tf.marked.contains(node);
                assignment.insert(node.clone(), ShortcutSpec::simple(bridged));
                shortcut_nodes.push(node.clone());
                if bridged {
                    bridges.push(node_key(node));
                }
            }
            params_meta.insert("shortcuts".to_string(), node_list(&shortcut_nodes));
            ("psi", psi(&assignment, &params).map_err(|e| e.to_string())?)
        }
        GenKind::Phi => {
            let path = assign.ok_or("phi requires --assign FILE")?;
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let tf = parse_tree_file(&text).map_err(|e| e.to_string())?;
            let mut table = SchemeTable::new();
            let mut marked: Vec<Node> = Vec::new();
            for node in &tf.listed {
                if node.is_empty() {
                    return Err("phi: the root carries no table entry".to_string());
                }
                table.insert(node.clone(), true);
                marked.push(node.clone());
            }
            params_meta.insert("table".to_string(), node_list(&marked));
            let complex = reduction_phi(&table, &params).map_err(|e| e.to_string())?;
            let reg = pc_core::constructions::regularize(&table, &params);
            bridges = reg
                .iter()
                .filter(|(_, &marked)| !marked)
                .map(|(n, _)| node_key(n))
                .collect();
            ("phi", complex)
        }
    };
    let doc = GeometryDocument::from_complex(
        &complex,
        DocMetadata { generator: name.to_string(), params: params_meta, bridges },
    );
    doc.save(out).map_err(|e| format!("{}: {e}", out.display()))?;
    println!(
        "{name}: {} points, {} segments, {} labels -> {}",
        doc.points.len(),
        doc.segments.len(),
        doc.labels.len(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

/// Resolve a label name or `x,y` pair to a graph vertex; coordinates snap to
/// the nearest vertex within the geometric tolerance.
fn resolve_vertex(g: &EmbeddedGraph, spec: &str) -> Result<usize, String> {
    if let Some(v) = g.label_vertex(spec) {
        return Ok(v);
    }
    if let Some((xs, ys)) = spec.split_once(',') {
        let x: f64 = xs.trim().parse().map_err(|_| format!("bad coordinate {spec:?}"))?;
        let y: f64 = ys.trim().parse().map_err(|_| format!("bad coordinate {spec:?}"))?;
        return g
            .vertex_near(Point::new(x, y))
            .ok_or_else(|| format!("no vertex within tolerance of ({x}, {y})"));
    }
    Err(format!("unknown label {spec:?}"))
}

fn cmd_delta(input: &Path, from: &str, to: &str) -> Result<ExitCode, String> {
    let (_, complex) = load_complex(input)?;
    let g = planarize(&complex);
    let x = resolve_vertex(&g, from)?;
    let y = resolve_vertex(&g, to)?;
    let budget = match std::env::var("PC_NODE_BUDGET") {
        Ok(s) => s.parse::<u64>().map_err(|_| format!("bad PC_NODE_BUDGET {s:?}"))?,
        Err(_) => DEFAULT_NODE_BUDGET,
    };
    match delta_with_budget(&g, x, y, budget) {
        Ok(r) => {
            if r.value.is_finite() {
                println!("delta = {}", r.value);
                let w = r.witness.expect("finite value carries a witness");
                let verts: Vec<String> = w.verts.iter().map(|v| v.to_string()).collect();
                println!("witness = {}", verts.join(" "));
                println!("witness_length = {}", w.length);
                println!("expanded = {}", r.expanded);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("delta = inf");
                println!("expanded = {}", r.expanded);
                Ok(ExitCode::from(EXIT_SEMANTIC))
            }
        }
        Err(MetricError::BudgetExceeded { expanded }) => {
            eprintln!("error: search budget exceeded after {expanded} expansions");
            Ok(ExitCode::from(EXIT_SEMANTIC))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_triods(input: &Path) -> Result<ExitCode, String> {
    let (_, complex) = load_complex(input)?;
    let g = planarize(&complex);
    let triods = detect_triods(&g);
    println!("{} triods", triods.len());
    for t in &triods {
        let c = t.center();
        let v = t.graph_ref().map(|r| r.center).unwrap_or(usize::MAX);
        println!("triod at vertex {v}: center = ({}, {})", c.x, c.y);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_trap_check(input: &Path, eps: f64) -> Result<ExitCode, String> {
    let (_, complex) = load_complex(input)?;
    let g = planarize(&complex);
    let triods = detect_triods(&g);
    println!("{} triods", triods.len());
    let mut traps = Vec::new();
    for (i, t) in triods.iter().enumerate() {
        match find_rational_trap(t, eps) {
            Ok(trap) => {
                let ok = is_weakly_compatible(t, &trap);
                println!(
                    "triod {i}: trap diam = {} weakly_compatible = {ok}",
                    trap.diam()
                );
                if !ok {
                    eprintln!("error: emitted trap fails weak compatibility for triod {i}");
                    return Ok(ExitCode::from(EXIT_VIOLATION));
                }
                traps.push(trap);
            }
            Err(TriodError::TooDegenerate) => {
                eprintln!("error: triod {i} too degenerate at this tolerance");
                return Ok(ExitCode::from(EXIT_SEMANTIC));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    // Any two triods falling into one trap must intersect.
    let mut checked = 0usize;
    for trap in &traps {
        for i in 0..triods.len() {
            for j in (i + 1)..triods.len() {
                if is_compatible(&triods[i], trap) && is_compatible(&triods[j], trap) {
                    checked += 1;
                    if let Err(TriodError::MooreViolation) =
                        moore_intersect(&triods[i], &triods[j], trap)
                    {
                        eprintln!("error: MOORE VIOLATION between triods {i} and {j}");
                        return Ok(ExitCode::from(EXIT_VIOLATION));
                    }
                }
            }
        }
    }
    println!("trap checks passed ({checked} shared-trap pairs)");
    Ok(ExitCode::SUCCESS)
}

fn cmd_components(input: &Path, eps: Option<f64>) -> Result<ExitCode, String> {
    let (_, complex) = load_complex(input)?;
    match eps {
        None => {
            let g = planarize(&complex);
            let comps = arc_components(&g);
            println!("components = {}", comps.len());
            for (name, &v) in g.labels() {
                let k = comps.iter().position(|c| c.contains(&v)).expect("vertex in a class");
                println!("label {name} -> component {k}");
            }
        }
        Some(eps) => {
            let h = eps / 4.0;
            let comps = eps_components(&complex, eps, h).map_err(|e| e.to_string())?;
            println!("eps_components = {}", comps.len());
            for (name, &i) in complex.labels() {
                let k = comps.iter().position(|c| c.contains(&i)).expect("point in a class");
                println!("label {name} -> component {k}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_svg(input: &Path, out: &Path, stroke: f64) -> Result<ExitCode, String> {
    let doc = GeometryDocument::load(input).map_err(|e| format!("{}: {e}", input.display()))?;
    let svg = render_svg(&doc, stroke);
    std::fs::write(out, svg).map_err(|e| format!("{}: {e}", out.display()))?;
    println!("svg -> {}", out.display());
    Ok(ExitCode::SUCCESS)
}
