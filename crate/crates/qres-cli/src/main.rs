//! `qres`: command line front end for the Q-resolution library.
//!
//! Every command reads exact data (JSON documents or short inline strings),
//! performs one library operation and prints JSON, or DOT where a graph has
//! a drawing. Exit codes: 0 on success, 1 on domain errors with a structured
//! JSON diagnostic, 2 on syntax errors. No floating point ever reaches the
//! output; rationals stay in the {"num","den"} wire format.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use qres_core::arith::{qq_serde, QQ};
use qres_core::blowup::{blowup, Weight};
use qres_core::curve::{resolve_quotient, CurveGerm};
use qres_core::error::{Error, Result};
use qres_core::graph::DualGraph;
use qres_core::intersection::{curvette_matrix, intersection_matrix, local_intersection};
use qres_core::jung::{jung_resolution, resolve_cyclic_point, smooth_refinement, SurfaceGerm};
use qres_core::parse::parse_binomial_curve;
use qres_core::quotient::CyclicType;
use qres_core::wproj::{bezout, WPPlane};

#[derive(Parser)]
#[command(
    name = "qres",
    version,
    about = "Embedded Q-resolutions of curve and surface germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a cyclic quotient type in its normalized form
    Normalize {
        /// Type as "d;a,b"
        #[arg(long = "type")]
        ty: String,
    },
    /// Weighted blow-up of the origin of a cyclic quotient chart
    Blowup {
        /// Ambient type as "d;a,b"
        #[arg(long = "type")]
        ty: String,
        /// Weight as "p,q"
        #[arg(long)]
        weight: String,
    },
    /// Embedded Q-resolution of a curve germ
    Resolve {
        /// Polynomial in x and y (a product of supported factors)
        #[arg(long, conflicts_with = "file")]
        poly: Option<String>,
        /// Ambient type for --poly, as "d;a,b" (smooth when absent)
        #[arg(long = "type", requires = "poly")]
        ty: Option<String>,
        /// Curve germ JSON; stdin when neither --poly nor --file is given
        #[arg(long)]
        file: Option<PathBuf>,
        /// Emit the dual graph as DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Intersection and curvette matrices of a resolution graph
    Intersect {
        /// Resolution graph JSON; stdin when absent
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Two 1-based branch indices: print their local intersection number
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Global intersection number of two curves in a quotient of a weighted
    /// projective plane
    Bezout {
        /// JSON {"w":[p,q,r],"action":[d,a,b,c],"deg1":n1,"deg2":n2};
        /// stdin when absent
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Q-resolution of the surface z^n = f(x,y) from the embedded graph of f
    Jung {
        /// JSON {"n": int, "base": graph}; stdin when absent
        #[arg(long)]
        file: Option<PathBuf>,
        /// Emit the dual graph as DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Hirzebruch-Jung chain of self-intersections for a cyclic point
    Hj {
        /// Type as "d;a,b"
        #[arg(long = "type")]
        ty: String,
    },
    /// Blow every cyclic point up into its chain: the classical resolution
    Refine {
        /// Resolution graph JSON; stdin when absent
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Emit the refined graph as DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
}

/// Exact rational in the {"num","den"} wire format, for `json!` embedding.
#[derive(serde::Serialize)]
struct Rat(#[serde(with = "qq_serde")] QQ);

#[derive(Deserialize)]
struct BezoutInput {
    w: [i64; 3],
    action: [i64; 4],
    deg1: i64,
    deg2: i64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", json!({"error": e.code(), "message": e.to_string()}));
            if e.is_syntactic() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Normalize { ty } => {
            let t: CyclicType = ty.parse()?;
            let (norm, (e1, e2)) = t.normalize()?;
            Ok(json!({"type": norm, "exponents": [e1, e2]}).to_string())
        }
        Command::Blowup { ty, weight } => {
            let t: CyclicType = ty.parse()?;
            let w = parse_weight(&weight)?;
            to_json(&blowup(&t, w)?)
        }
        Command::Resolve {
            poly,
            ty,
            file,
            dot,
        } => {
            let germ = match poly {
                Some(src) => {
                    let ambient = match ty {
                        Some(t) => t.parse()?,
                        None => CyclicType::smooth(),
                    };
                    parse_binomial_curve(&src, ambient)?
                }
                None => from_json::<CurveGerm>(&read_input(file.as_ref())?)?,
            };
            let graph = resolve_quotient(&germ)?;
            if dot {
                Ok(graph.to_dot())
            } else {
                to_json(&graph)
            }
        }
        Command::Intersect { graph, pair } => {
            let g: DualGraph = from_json(&read_input(graph.as_ref())?)?;
            match pair {
                Some(idx) => {
                    let value = local_intersection(&g, idx[0], idx[1])?;
                    Ok(json!({"value": Rat(value)}).to_string())
                }
                None => {
                    let a = intersection_matrix(&g)?;
                    let b = curvette_matrix(&a)?;
                    let mut out = to_value(&a)?;
                    let bv = to_value(&b)?;
                    out["B"] = bv["B"].clone();
                    Ok(out.to_string())
                }
            }
        }
        Command::Bezout { file } => {
            let input: BezoutInput = from_json(&read_input(file.as_ref())?)?;
            let plane = WPPlane::new(input.w, input.action)?;
            let value = bezout(&plane, input.deg1, input.deg2);
            let dpqr = plane.dpqr();
            let dpqr = match i64::try_from(&dpqr) {
                Ok(n) => json!(n),
                Err(_) => json!(dpqr.to_string()),
            };
            Ok(json!({"value": Rat(value), "e": plane.e(), "dpqr": dpqr}).to_string())
        }
        Command::Jung { file, dot } => {
            let germ: SurfaceGerm = from_json(&read_input(file.as_ref())?)?;
            let graph = jung_resolution(&germ)?;
            if dot {
                Ok(graph.to_dot())
            } else {
                to_json(&graph)
            }
        }
        Command::Hj { ty } => {
            let t: CyclicType = ty.parse()?;
            Ok(json!({"chain": resolve_cyclic_point(&t)?}).to_string())
        }
        Command::Refine { graph, dot } => {
            let g: DualGraph = from_json(&read_input(graph.as_ref())?)?;
            let refined = smooth_refinement(&g)?;
            if dot {
                Ok(refined.to_dot())
            } else {
                to_json(&refined)
            }
        }
    }
}

fn parse_weight(s: &str) -> Result<Weight> {
    let t = s.trim();
    let t = t.strip_prefix('(').unwrap_or(t);
    let t = t.strip_suffix(')').unwrap_or(t);
    let bad = || Error::ParseError(format!("expected a weight \"p,q\", got {s:?}"));
    let (p, q) = t.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let q = q.trim().parse().map_err(|_| bad())?;
    Weight::new(p, q)
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Error::ParseError(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::ParseError(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))
}
