//! Command-line interface: file-driven access to every library operation,
//! with deterministic output for scripting and golden-file tests.
//!
//! All commands take a graph JSON file first; divisors arrive as JSON files,
//! points as `v0` / `e0:0.25` literals. Scalars print with 12 significant
//! digits and a decimal point, JSON is emitted compactly in a fixed field
//! order, so identical inputs produce byte-identical output.
//!
//! Exit codes: `0` success (and "yes" for predicates), `1` predicate is
//! false, `2` parse or validation failure (one-line diagnostic on stderr),
//! `3` certificate failure under `reduce --strict`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Tolerances};
use crate::io::{
    divisor_to_json, format_scalar, function_to_csv, function_to_svg, load_divisor, load_graph,
    parse_point, round_sig, DivisorJson,
};
use crate::potential::{associated_function, effective_resistance, j_function};
use crate::projection::{canonical_project, retraction_sample, ProjectionTarget};
use crate::reduced::{extremals, hull_contains, reduced_on_hull, ReducedStatus, TConvexHull};
use crate::space::{rho, s_func, segment_contains, segment_intersection, TSegment};

#[derive(Parser)]
#[command(
    name = "divgraph",
    version,
    about = "Potential theory and tropical convexity on compact metric graphs"
)]
struct Cli {
    /// Relative value tolerance (default 1e-9; env DIVGRAPH_TOL_VAL).
    #[arg(long, global = true, value_name = "REL")]
    tol_val: Option<f64>,
    /// Relative length tolerance (default 1e-12; env DIVGRAPH_TOL_LEN).
    #[arg(long, global = true, value_name = "REL")]
    tol_len: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two divisors in the divisor metric.
    Rho { graph: PathBuf, d1: PathBuf, d2: PathBuf },
    /// Deviation of D2 from D1: the integral of the normalized associated
    /// function of D2 - D1.
    Sfunc { graph: PathBuf, d1: PathBuf, d2: PathBuf },
    /// Effective resistance between two points.
    Resistance {
        graph: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Potential at x when unit current enters at p and exits at grounded q,
    /// sampled to CSV.
    Jfun {
        graph: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Uniform samples per edge, in addition to breakpoints.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Point of the tropical path from D1 to D2 at parameter t.
    Tpath {
        graph: PathBuf,
        d1: PathBuf,
        d2: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Does D lie on the tropical segment from D1 to D2? ("true"/"false",
    /// exit 0/1)
    SegmentContains {
        graph: PathBuf,
        d1: PathBuf,
        d2: PathBuf,
        d: PathBuf,
    },
    /// Intersection of the segments [A1,A2] and [B1,B2]: its endpoints, or
    /// "empty" (exit 1).
    SegmentIntersect {
        graph: PathBuf,
        a1: PathBuf,
        a2: PathBuf,
        b1: PathBuf,
        b2: PathBuf,
    },
    /// Divisor of the hull reduced with respect to the base divisor E, with
    /// its optimality certificate.
    Reduce {
        graph: PathBuf,
        e: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        hull: Vec<PathBuf>,
        /// Exit 3 unless the certificate holds.
        #[arg(long)]
        strict: bool,
    },
    /// Is E a member of the hull? ("true"/"false", exit 0/1)
    Member {
        graph: PathBuf,
        e: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        hull: Vec<PathBuf>,
    },
    /// Minimal generating subset of the hull.
    Extremals {
        graph: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        hull: Vec<PathBuf>,
    },
    /// Canonical projection of E onto the hull (rescale, then reduce).
    Project {
        graph: PathBuf,
        e: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        hull: Vec<PathBuf>,
    },
    /// Retraction sample h(t, D): D moved toward the hull so that distance
    /// kappa*(1-t) remains.
    Retract {
        graph: PathBuf,
        d: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        hull: Vec<PathBuf>,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        kappa: f64,
    },
    /// Per-edge SVG plot of the normalized associated function of D2 - D1.
    Plot {
        graph: PathBuf,
        d1: PathBuf,
        d2: PathBuf,
        /// Write the SVG here instead of stdout.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct CertificateOut {
    generator_meets: Vec<bool>,
    gmin_union_matches: bool,
}

#[derive(Serialize)]
struct ReduceOut {
    divisor: DivisorJson,
    objective: f64,
    status: &'static str,
    certificate: CertificateOut,
}

#[derive(Serialize)]
struct SegmentOut {
    endpoints: [DivisorJson; 2],
    length: f64,
}

#[derive(Serialize)]
struct GeneratorsOut {
    generators: Vec<DivisorJson>,
}

/// Run the CLI on the given argument list (`args[0]` is the program name),
/// writing to the supplied streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e @ Error::CertificateFailed) => {
            let _ = writeln!(err, "error: {e}");
            3
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn tolerance(flag: Option<f64>, env_key: &str, default: f64) -> Result<f64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(env_key) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid {env_key}: '{s}'"))),
        Err(_) => Ok(default),
    }
}

fn load_hull(g: &MetricGraph, paths: &[PathBuf]) -> Result<TConvexHull> {
    let gens: Vec<RDivisor> =
        paths.iter().map(|p| load_divisor(p, g)).collect::<Result<_>>()?;
    TConvexHull::new(g, gens)
}

fn print_divisor(out: &mut dyn Write, g: &MetricGraph, d: &RDivisor) -> Result<i32> {
    writeln!(out, "{}", serde_json::to_string(&divisor_to_json(g, d))?)?;
    Ok(0)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let defaults = Tolerances::default();
    let tol = Tolerances {
        val_rel: tolerance(cli.tol_val, "DIVGRAPH_TOL_VAL", defaults.val_rel)?,
        len_rel: tolerance(cli.tol_len, "DIVGRAPH_TOL_LEN", defaults.len_rel)?,
    };
    match cli.cmd {
        Cmd::Rho { graph, d1, d2 } => {
            let g = load_graph(&graph, tol)?;
            let (a, b) = (load_divisor(&d1, &g)?, load_divisor(&d2, &g)?);
            writeln!(out, "{}", format_scalar(rho(&g, &a, &b)?))?;
            Ok(0)
        }
        Cmd::Sfunc { graph, d1, d2 } => {
            let g = load_graph(&graph, tol)?;
            let (a, b) = (load_divisor(&d1, &g)?, load_divisor(&d2, &g)?);
            writeln!(out, "{}", format_scalar(s_func(&g, &a, &b)?))?;
            Ok(0)
        }
        Cmd::Resistance { graph, p, q } => {
            let g = load_graph(&graph, tol)?;
            let (pp, qq) = (parse_point(&g, &p)?, parse_point(&g, &q)?);
            writeln!(out, "{}", format_scalar(effective_resistance(&g, &pp, &qq)?))?;
            Ok(0)
        }
        Cmd::Jfun { graph, p, q, csv, samples } => {
            let g = load_graph(&graph, tol)?;
            let (pp, qq) = (parse_point(&g, &p)?, parse_point(&g, &q)?);
            let f = j_function(&g, &qq, &pp)?;
            let text = function_to_csv(&g, &f, samples)?;
            match csv {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Cmd::Tpath { graph, d1, d2, t } => {
            let g = load_graph(&graph, tol)?;
            let seg = TSegment::new(&g, load_divisor(&d1, &g)?, load_divisor(&d2, &g)?)?;
            let d = seg.eval(&g, t)?;
            print_divisor(out, &g, &d)
        }
        Cmd::SegmentContains { graph, d1, d2, d } => {
            let g = load_graph(&graph, tol)?;
            let seg = TSegment::new(&g, load_divisor(&d1, &g)?, load_divisor(&d2, &g)?)?;
            let inside = segment_contains(&g, &seg, &load_divisor(&d, &g)?)?;
            writeln!(out, "{inside}")?;
            Ok(if inside { 0 } else { 1 })
        }
        Cmd::SegmentIntersect { graph, a1, a2, b1, b2 } => {
            let g = load_graph(&graph, tol)?;
            let s1 = TSegment::new(&g, load_divisor(&a1, &g)?, load_divisor(&a2, &g)?)?;
            let s2 = TSegment::new(&g, load_divisor(&b1, &g)?, load_divisor(&b2, &g)?)?;
            match segment_intersection(&g, &s1, &s2)? {
                Some(seg) => {
                    let (p, q) = seg.endpoints();
                    let doc = SegmentOut {
                        endpoints: [divisor_to_json(&g, p), divisor_to_json(&g, q)],
                        length: round_sig(seg.length()),
                    };
                    writeln!(out, "{}", serde_json::to_string(&doc)?)?;
                    Ok(0)
                }
                None => {
                    writeln!(out, "empty")?;
                    Ok(1)
                }
            }
        }
        Cmd::Reduce { graph, e, hull, strict } => {
            let g = load_graph(&graph, tol)?;
            let hull = load_hull(&g, &hull)?;
            let base = load_divisor(&e, &g)?;
            let mut result = reduced_on_hull(&g, &hull, &base)?;
            if strict {
                result = result.require_certified()?;
            }
            let doc = ReduceOut {
                divisor: divisor_to_json(&g, &result.divisor),
                objective: round_sig(result.objective),
                status: match result.status {
                    ReducedStatus::Certified => "certified",
                    ReducedStatus::BestEffort => "best-effort",
                },
                certificate: CertificateOut {
                    generator_meets: result.certificate.generator_meets,
                    gmin_union_matches: result.certificate.gmin_union_matches,
                },
            };
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
            Ok(0)
        }
        Cmd::Member { graph, e, hull } => {
            let g = load_graph(&graph, tol)?;
            let hull = load_hull(&g, &hull)?;
            let inside = hull_contains(&g, &hull, &load_divisor(&e, &g)?)?;
            writeln!(out, "{inside}")?;
            Ok(if inside { 0 } else { 1 })
        }
        Cmd::Extremals { graph, hull } => {
            let g = load_graph(&graph, tol)?;
            let hull = load_hull(&g, &hull)?;
            let min = extremals(&g, &hull)?;
            let doc = GeneratorsOut {
                generators: min.generators().iter().map(|d| divisor_to_json(&g, d)).collect(),
            };
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
            Ok(0)
        }
        Cmd::Project { graph, e, hull } => {
            let g = load_graph(&graph, tol)?;
            let hull = ProjectionTarget::Hull(load_hull(&g, &hull)?);
            let proj = canonical_project(&g, &hull, &load_divisor(&e, &g)?)?;
            print_divisor(out, &g, &proj.divisor)
        }
        Cmd::Retract { graph, d, hull, t, kappa } => {
            let g = load_graph(&graph, tol)?;
            let hull = ProjectionTarget::Hull(load_hull(&g, &hull)?);
            let moved = retraction_sample(&g, &hull, &load_divisor(&d, &g)?, t, kappa)?;
            print_divisor(out, &g, &moved)
        }
        Cmd::Plot { graph, d1, d2, svg } => {
            let g = load_graph(&graph, tol)?;
            let f = associated_function(&g, &load_divisor(&d1, &g)?, &load_divisor(&d2, &g)?)?;
            let text = function_to_svg(&g, &f)?;
            match svg {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}
