//! The `affsel` command-line front end.
//!
//! Every invocation prints one JSON document on standard output and
//! diagnostics on standard error. Exit codes: 0 when a result was computed
//! (whether or not a selection exists), 1 for input errors, 2 for domain and
//! not-interior errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{
    hahn_banach, olsen, random_convex_graph, HahnBanachSpec, PolyhedralNorm, RandomGraphOptions,
};
use crate::io::{
    approximate, instance_to_json, parse_instance, parse_map, to_pretty, AuditDoc, AuditPairDoc,
    Instance, IntervalSelectionDoc, LocalSelectionDoc, OutcomeDoc, VerificationDoc,
};
use crate::lp::verify_farkas;
use crate::multifunction::{audit_convexity, audit_intersection, sample_graph, GraphMultifunction};
use crate::rational::{lerp, parse_rational, rat, Rational};
use crate::selection::{
    global_selection, interval_data, interval_selection_1d, local_selection, sandwich, sandwich_lp,
    verify_global_certificate, verify_selection,
};

#[derive(Debug, Parser)]
#[command(
    name = "affsel",
    version,
    about = "Exact affine selections of convex multifunctions"
)]
struct Cli {
    /// Add decimal renderings (approximate) next to the exact output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit the convexity inclusion and the intersection condition.
    Audit { file: Option<PathBuf> },
    /// Decide whether a global affine selection exists.
    SelectGlobal { file: Option<PathBuf> },
    /// Build a local affine selection around an interior point.
    SelectLocal {
        file: Option<PathBuf>,
        /// Comma-separated coordinates, e.g. `0,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Fit an affine function between lower and upper data.
    Sandwich { file: Option<PathBuf> },
    /// Write a built-in instance.
    Example {
        which: ExampleKind,
        #[arg(long, env = "AFFSEL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Domain dimension (random instances).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Codomain dimension (random instances).
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Number of graph vertices (random instances).
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        /// Norm on Y for the extension instance.
        #[arg(long, value_enum, default_value_t = NormArg::Sup)]
        norm: NormArg,
    },
    /// Check a candidate map against a graph instance at random points.
    Verify {
        file: Option<PathBuf>,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "AFFSEL_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleKind {
    Olsen,
    HahnBanach,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Sup,
    One,
}

/// Outcome of a CLI run: the document for stdout, if any, and the exit code.
struct Report {
    document: Option<String>,
}

fn read_source(file: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    match file {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        }
        _ => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Error::Input(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|c| {
            parse_rational(c).map_err(|e| match e {
                Error::Input(msg) => Error::Input(format!("--point: {msg}")),
                other => other,
            })
        })
        .collect()
}

fn expect_graph(instance: Instance, command: &str) -> Result<GraphMultifunction> {
    match instance {
        Instance::Graph(g) => Ok(g),
        _ => Err(Error::Input(format!(
            "{command} expects a graph instance (field kind)"
        ))),
    }
}

/// Sample points used to audit a graph instance: the distinct domain
/// vertices followed by their pairwise midpoints.
fn audit_points(g: &GraphMultifunction) -> Vec<Vec<Rational>> {
    let mut points: Vec<Vec<Rational>> = g.domain().into_vertices();
    let corners = points.len();
    let half = rat(1, 2);
    for a in 0..corners {
        for b in a + 1..corners {
            let mid = lerp(&half, &points[a], &points[b]);
            if !points.contains(&mid) {
                points.push(mid);
            }
        }
    }
    points
}

fn render<T: Serialize>(doc: &T, pretty: bool) -> String {
    if !pretty {
        return to_pretty(doc);
    }
    let exact = serde_json::to_value(doc).expect("documents serialize");
    let mut wrapped = serde_json::Map::new();
    wrapped.insert("exact".into(), exact.clone());
    wrapped.insert(
        "approximate_decimal_rendering_not_exact".into(),
        approximate(&exact),
    );
    to_pretty(&serde_json::Value::Object(wrapped))
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<Report> {
    let pretty = cli.pretty;
    let document = match cli.command {
        Command::Audit { file } => {
            let sampled = match parse_instance(&read_source(&file, stdin)?)? {
                Instance::Sampled(s) => s,
                Instance::Graph(g) => sample_graph(&g, &audit_points(&g))?,
                Instance::Sandwich { .. } => {
                    return Err(Error::input(
                        "audit expects a sampled or graph instance (field kind)",
                    ))
                }
            };
            let doc = AuditPairDoc {
                kind: "audit_report",
                inner_approximation: sampled.is_inner_approximation(),
                convexity: AuditDoc::from(&audit_convexity(&sampled)),
                intersection: AuditDoc::from(&audit_intersection(&sampled)),
            };
            render(&doc, pretty)
        }
        Command::SelectGlobal { file } => match parse_instance(&read_source(&file, stdin)?)? {
            Instance::Graph(g) => {
                let outcome = global_selection(&g)?;
                let verified = verify_global_certificate(&g, &outcome)?;
                render(&OutcomeDoc::new(&outcome, verified), pretty)
            }
            Instance::Sampled(s) => {
                let sel = interval_selection_1d(&s)?;
                let verified = match &sel.outcome.certificate {
                    Some(cert) => {
                        let (lower, upper) = interval_data(&s)?;
                        verify_farkas(&sandwich_lp(&lower, &upper)?, cert)?
                    }
                    None => false,
                };
                render(&IntervalSelectionDoc::new(&sel, verified), pretty)
            }
            Instance::Sandwich { .. } => {
                return Err(Error::input(
                    "select-global expects a graph instance (field kind)",
                ))
            }
        },
        Command::SelectLocal { file, point } => {
            let x0 = parse_point(&point)?;
            let g = expect_graph(parse_instance(&read_source(&file, stdin)?)?, "select-local")?;
            let local = local_selection(&g, &x0)?;
            render(&LocalSelectionDoc::from(&local), pretty)
        }
        Command::Sandwich { file } => match parse_instance(&read_source(&file, stdin)?)? {
            Instance::Sandwich { lower, upper } => {
                let outcome = sandwich(&lower, &upper)?;
                let verified = match &outcome.certificate {
                    Some(cert) => verify_farkas(&sandwich_lp(&lower, &upper)?, cert)?,
                    None => false,
                };
                render(&OutcomeDoc::new(&outcome, verified), pretty)
            }
            _ => {
                return Err(Error::input(
                    "sandwich expects a sandwich instance (field kind)",
                ))
            }
        },
        Command::Example {
            which,
            seed,
            out,
            n,
            m,
            vertices,
            norm,
        } => {
            let instance = match which {
                ExampleKind::Olsen => Instance::Graph(olsen()),
                ExampleKind::HahnBanach => {
                    let mut spec = HahnBanachSpec::diagonal_sup_norm();
                    spec.norm = match norm {
                        NormArg::Sup => PolyhedralNorm::Sup,
                        NormArg::One => PolyhedralNorm::One,
                    };
                    Instance::Sampled(hahn_banach(&spec)?)
                }
                ExampleKind::Random => Instance::Graph(random_convex_graph(
                    &RandomGraphOptions::new(n, m, vertices, seed),
                )?),
            };
            let text = instance_to_json(&instance);
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| {
                        Error::Input(format!("cannot write {}: {e}", path.display()))
                    })?;
                    return Ok(Report { document: None });
                }
                None => text,
            }
        }
        Command::Verify {
            file,
            map,
            trials,
            seed,
        } => {
            let g = expect_graph(parse_instance(&read_source(&file, stdin)?)?, "verify")?;
            let map_text = std::fs::read_to_string(&map)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", map.display())))?;
            let candidate = parse_map(&map_text)?;
            let report = verify_selection(&g, &candidate, trials, seed)?;
            render(&VerificationDoc::from(&report), pretty)
        }
    };
    Ok(Report {
        document: Some(document),
    })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::NotInterior(_) => 2,
        Error::Input(_) | Error::Geometry(_) | Error::Unsupported(_) => 1,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli, stdin) {
        Ok(report) => {
            if let Some(doc) = report.document {
                if let Err(e) = stdout.write_all(doc.as_bytes()) {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    return 1;
                }
            }
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}
