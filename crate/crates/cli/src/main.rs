//! `wchip`: command-line front end.
//!
//! Structured results go to standard output as single-line JSON,
//! diagnostics to standard error. Exit status is 0 on success, 1 for bad
//! input (unreadable or malformed files, unknown flags, failed validation)
//! and 2 when an operation's precondition does not hold.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wchip::arithmetic::component_group;
use wchip::bernardi::{all_subweighted_trees, default_roots, tree_divisor, Root, RepresentativeTable};
use wchip::divisor::laplacian;
use wchip::graph::WeightedGraph;
use wchip::hat::expand_hat;
use wchip::picard::{count_pic0, count_picb0, pic0_structure, picb0_structure};
use wchip::rewrite::{add_leaf, shrink_vertex_weight, split_edge, split_vertex, SplitPlan};
use wchip::selfcheck::{self, SelfCheckOptions};
use wchip::family::FamilyBounds;
use wchip::{io, Error};

#[derive(Parser)]
#[command(name = "wchip", version, about = "Weighted chip-firing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file: well-formedness, pleasantness, connectivity.
    Validate(GraphOpts),
    /// Weighted genus of the graph and of each component.
    Genus(GraphOpts),
    /// Invariant factors of Pic⁰ (default) or Pic_b⁰.
    Group {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, conflicts_with = "picb0")]
        pic0: bool,
        #[arg(long)]
        picb0: bool,
    },
    /// Number of (balanced) sub-weighted spanning trees.
    Count {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long)]
        balanced: bool,
    },
    /// List sub-weighted spanning trees with their divisors.
    Trees {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long)]
        balanced: bool,
        #[command(flatten)]
        root: RootOpts,
    },
    /// The Laplacian matrix, or Δ(f) for a potential given with --divisor.
    Laplacian {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, value_name = "FILE")]
        divisor: Option<PathBuf>,
    },
    /// Reduce a divisor of degree g − 1 to its sub-weighted tree.
    Reduce {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, value_name = "FILE")]
        divisor: PathBuf,
        #[command(flatten)]
        root: RootOpts,
    },
    /// Act by a degree-0 divisor on a sub-weighted tree.
    Act {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, value_name = "FILE")]
        divisor: PathBuf,
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
    },
    /// The unweighted expansion with each edge repeated ω(e) times.
    Expand {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply a graph rewrite.
    Rewrite {
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(subcommand)]
        op: RewriteOp,
    },
    /// Component group of a special-fiber description.
    Fiber {
        #[arg(long, value_name = "FILE")]
        fiber: PathBuf,
    },
    /// Cross-check every invariant over a bounded family of graphs.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long, default_value_t = 5)]
        max_edges: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: u64,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GraphOpts {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// JSON output for commands that print plain text by default.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RootOpts {
    /// Root of its component (default: least vertex).
    #[arg(long, value_name = "V")]
    root: Option<String>,
    /// Starting half-edge at the root (default: first in its ribbon).
    #[arg(long, value_name = "E", requires = "root")]
    start: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum RewriteOp {
    /// Attach a new leaf to a vertex.
    Leaf {
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = 1)]
        leaf_weight: u64,
        #[arg(long, default_value_t = 1)]
        edge_weight: u64,
    },
    /// Replace an edge by parallel edges.
    SplitEdge {
        #[arg(long)]
        edge: String,
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<u64>,
    },
    /// Lower a vertex weight to a divisor of it.
    Shrink {
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        weight: u64,
    },
    /// Split a vertex into copies, dividing each incident edge evenly.
    SplitVertex {
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        copies: usize,
    },
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(o: &GraphOpts) -> Result<WeightedGraph, Failure> {
    Ok(io::graph_from_str(&read(&o.graph)?)?)
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn vertex(g: &WeightedGraph, label: &str) -> Result<usize, Failure> {
    g.vertex_index(label)
        .ok_or_else(|| Failure::Input(format!("unknown vertex {label}")))
}

fn edge(g: &WeightedGraph, label: &str) -> Result<usize, Failure> {
    g.edge_index(label)
        .ok_or_else(|| Failure::Input(format!("unknown edge {label}")))
}

fn roots(g: &WeightedGraph, o: &RootOpts) -> Result<Vec<Root>, Failure> {
    let mut roots = default_roots(g);
    if let Some(label) = &o.root {
        let v = vertex(g, label)?;
        let start = match &o.start {
            Some(s) => Some(io::parse_start(g, v, s)?),
            None => g.ribbon(v).first().copied(),
        };
        let comp = g.component_index();
        for r in roots.iter_mut().filter(|r| comp[r.vertex] == comp[v]) {
            *r = Root { vertex: v, start };
        }
    }
    Ok(roots)
}

fn graph_output(g: &WeightedGraph, format: Format) -> String {
    match format {
        Format::Json => io::graph_to_json(g).to_string(),
        Format::Dot => io::graph_to_dot(g).trim_end().to_string(),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(o) => {
            let g = load_graph(&o)?;
            let r = g.validate();
            let out = if o.json {
                json!({ "pleasant": r.pleasant, "connected": r.connected, "issues": r.issues }).to_string()
            } else {
                let mut s = format!("pleasant: {}\nconnected: {}", r.pleasant, r.connected);
                for i in &r.issues {
                    s.push_str(&format!("\nissue: {i}"));
                }
                s
            };
            if r.pleasant {
                Ok(out)
            } else {
                emit(&out);
                Err(Failure::Input("graph weighting is not pleasant".into()))
            }
        }
        Command::Genus(o) => {
            let g = load_graph(&o)?;
            let r = g.genus_report();
            Ok(if o.json {
                json!({ "genus": r.genus, "components": r.components }).to_string()
            } else {
                r.genus.to_string()
            })
        }
        Command::Group { graph, picb0, .. } => {
            let g = load_graph(&graph)?;
            let a = if picb0 { picb0_structure(&g)? } else { pic0_structure(&g) };
            Ok(io::group_to_json(&a).to_string())
        }
        Command::Count { graph, balanced } => {
            let g = load_graph(&graph)?;
            let n = if balanced { count_picb0(&g)? } else { count_pic0(&g) };
            Ok(if graph.json {
                json!({ "count": io::bigint_to_json(&n) }).to_string()
            } else {
                n.to_string()
            })
        }
        Command::Trees { graph, balanced, root } => {
            let g = load_graph(&graph)?;
            let roots = roots(&g, &root)?;
            let mut out = Vec::new();
            for t in all_subweighted_trees(&g, &roots, balanced)? {
                let mut v = io::subweighted_tree_to_json(&g, &t);
                v["divisor"] = io::divisor_to_json(&g, &tree_divisor(&g, &t)?);
                out.push(v);
            }
            Ok(Value::Array(out).to_string())
        }
        Command::Laplacian { graph, divisor } => {
            let g = load_graph(&graph)?;
            match divisor {
                None => {
                    let ids: Vec<&str> = g.vertices().iter().map(|v| v.label.as_str()).collect();
                    Ok(json!({ "vertices": ids, "matrix": g.laplacian_matrix() }).to_string())
                }
                Some(path) => {
                    let v = load_json(&path)?;
                    let f = if v.get("potential").is_some() {
                        io::certificate_from_json(&g, &v)?.potential
                    } else {
                        io::divisor_from_json(&g, &v)?.into_coefficients()
                    };
                    Ok(io::divisor_to_json(&g, &laplacian(&g, &f)).to_string())
                }
            }
        }
        Command::Reduce { graph, divisor, root } => {
            let g = load_graph(&graph)?;
            let d = io::divisor_from_json(&g, &load_json(&divisor)?)?;
            let table = RepresentativeTable::new(&g, &roots(&g, &root)?)?;
            let (t, cert) = table.reduce(&d)?;
            let mut v = json!({
                "representative": io::subweighted_tree_to_json(&g, &t),
                "divisor": io::divisor_to_json(&g, &tree_divisor(&g, &t)?),
            });
            v["potential"] = io::certificate_to_json(&g, &cert)["potential"].take();
            Ok(v.to_string())
        }
        Command::Act { graph, divisor, tree } => {
            let g = load_graph(&graph)?;
            let d = io::divisor_from_json(&g, &load_json(&divisor)?)?;
            let t = io::subweighted_tree_from_json(&g, &load_json(&tree)?)?;
            let table = RepresentativeTable::new(&g, &t.roots)?;
            let out = table.act(&g, &d, &t)?;
            Ok(io::subweighted_tree_to_json(&g, &out).to_string())
        }
        Command::Expand { graph, format } => {
            let g = load_graph(&graph)?;
            let hat = expand_hat(&g)?;
            Ok(match format {
                Format::Json => io::hat_to_json(&g, &hat).to_string(),
                Format::Dot => graph_output(&hat.graph, format),
            })
        }
        Command::Rewrite { graph, format, op } => {
            let g = load_graph(&graph)?;
            let h = match op {
                RewriteOp::Leaf {
                    vertex: v,
                    leaf_weight,
                    edge_weight,
                } => add_leaf(&g, vertex(&g, &v)?, leaf_weight, edge_weight)?,
                RewriteOp::SplitEdge { edge: e, parts } => split_edge(&g, edge(&g, &e)?, &parts)?,
                RewriteOp::Shrink { vertex: v, weight } => shrink_vertex_weight(&g, vertex(&g, &v)?, weight)?,
                RewriteOp::SplitVertex { vertex: v, copies } => {
                    let v = vertex(&g, &v)?;
                    split_vertex(&g, v, copies, &SplitPlan::symmetric(&g, v, copies)?)?.0
                }
            };
            Ok(graph_output(&h, format))
        }
        Command::Fiber { fiber } => {
            let f = io::fiber_from_str(&read(&fiber)?)?;
            let cg = component_group(&f)?;
            if !cg.connected {
                eprintln!("warning: fiber is disconnected; results are per component");
            }
            Ok(io::component_group_to_json(&cg).to_string())
        }
        Command::Selfcheck {
            seed,
            max_vertices,
            max_edges,
            max_weight,
            samples,
            json,
        } => {
            let opts = SelfCheckOptions {
                bounds: FamilyBounds {
                    max_vertices,
                    max_edges,
                    max_weight,
                    connected_only: true,
                },
                seed,
                samples,
            };
            let outcomes = selfcheck::run(&opts);
            let passed = outcomes.iter().all(|o| o.passed());
            let out = if json {
                let checks: Vec<Value> = outcomes
                    .iter()
                    .map(|o| json!({ "check": o.name, "cases": o.cases, "passed": o.passed(), "failures": o.failures }))
                    .collect();
                json!({ "seed": seed, "passed": passed, "checks": checks }).to_string()
            } else {
                outcomes
                    .iter()
                    .map(|o| {
                        let mut line = format!(
                            "{} {} ({} graphs)",
                            if o.passed() { "PASS" } else { "FAIL" },
                            o.name,
                            o.cases
                        );
                        for f in &o.failures {
                            line.push_str(&format!("\n  {f}"));
                        }
                        line
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            if passed {
                Ok(out)
            } else {
                emit(&out);
                Err(Failure::Input("self-check failed".into()))
            }
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(out: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{out}").and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
