//! `kcut` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or bad input, 2 I/O failure, 3 solver
//! invariant violation, 4 benchmark disagreement.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_suite, Suite};
use crate::error::KcutError;
use crate::generate::{gen_instance, InstanceKind};
use crate::graph::{parse_graph, Graph, Weight};
use crate::oracle::brute_force_min_kcut;
use crate::pipeline::{min_kcut, Branch, PipelineConfig};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kcut",
    version,
    about = "Minimum k-cut solver for simple graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Exact,
    Sparsify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Gnp,
    Planted,
    Cycle,
    CliquesBridge,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Small,
    Planted,
    Stress,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve and print the report as JSON.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        force_branch: Option<BranchArg>,
        #[arg(long)]
        trial_cap: Option<u64>,
        #[arg(long)]
        t: Option<u32>,
    },
    /// Exhaustive minimum k-cut (n <= 14).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Write a generated instance as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Cluster count for `planted`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        p_in: Option<f64>,
        #[arg(long)]
        p_out: Option<f64>,
        #[arg(long, default_value_t = 0)]
        islands: usize,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1)]
        bridges: usize,
    },
    /// Run a built-in suite against the oracle; CSV on stdout.
    Bench {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; the JSON report goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Solver(KcutError),
    Disagree(usize),
}

impl From<KcutError> for Failure {
    fn from(e: KcutError) -> Self {
        Failure::Solver(e)
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn need<T>(x: Option<T>, flag: &str) -> Result<T, Failure> {
    x.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this kind")))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(parse_graph(&text)?)
}

#[derive(Serialize)]
struct OracleOutput {
    k: usize,
    value: Weight,
    components: Vec<Vec<usize>>,
    method: &'static str,
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let write = |out: &mut dyn Write, text: &str| -> Result<(), Failure> {
        writeln!(out, "{text}").map_err(|e| Failure::Io(format!("stdout: {e}")))
    };
    match command {
        Command::Solve {
            graph,
            k,
            seed,
            force_branch,
            trial_cap,
            t,
        } => {
            let g = read_graph(&graph)?;
            let defaults = PipelineConfig::default();
            let cfg = PipelineConfig {
                seed,
                force_branch: force_branch.map(|b| match b {
                    BranchArg::Exact => Branch::Exact,
                    BranchArg::Sparsify => Branch::Sparsify,
                }),
                trial_cap: trial_cap.unwrap_or(defaults.trial_cap),
                t: t.unwrap_or(defaults.t),
                ..defaults
            };
            let report = min_kcut(&g, k, &cfg)?;
            write(out, &report.to_json())
        }
        Command::Oracle { graph, k } => {
            let g = read_graph(&graph)?;
            let cut = brute_force_min_kcut(&g, k)?.canonicalize();
            let doc = OracleOutput {
                k,
                value: cut.value(),
                components: cut.components(),
                method: "brute_force",
            };
            write(
                out,
                &serde_json::to_string_pretty(&doc).expect("plain data"),
            )
        }
        Command::Gen {
            kind,
            out: path,
            seed,
            n,
            p,
            k,
            size,
            p_in,
            p_out,
            islands,
            count,
            bridges,
        } => {
            let kind = match kind {
                KindArg::Gnp => InstanceKind::Gnp {
                    n: need(n, "n")?,
                    p: need(p, "p")?,
                },
                KindArg::Planted => InstanceKind::Planted {
                    k: need(k, "k")?,
                    size: need(size, "size")?,
                    p_in: need(p_in, "p-in")?,
                    p_out: need(p_out, "p-out")?,
                    islands,
                },
                KindArg::Cycle => InstanceKind::Cycle { n: need(n, "n")? },
                KindArg::CliquesBridge => InstanceKind::CliquesBridge {
                    size: need(size, "size")?,
                    count: need(count, "count")?,
                    bridges,
                },
            };
            let inst = gen_instance(&kind, seed)?;
            std::fs::write(&path, inst.graph.to_edge_list()).map_err(io_err(&path))?;
            Ok(())
        }
        Command::Bench {
            suite,
            seed,
            out: path,
        } => {
            let suite = match suite {
                SuiteArg::Small => Suite::Small,
                SuiteArg::Planted => Suite::Planted,
                SuiteArg::Stress => Suite::Stress,
            };
            let cfg = PipelineConfig {
                seed,
                ..Default::default()
            };
            let report = run_suite(suite, seed, &cfg)?;
            let csv = report.to_csv()?;
            if let Some(path) = path {
                std::fs::write(&path, &csv).map_err(io_err(&path))?;
                let json = path.with_extension("json");
                std::fs::write(&json, report.to_json()).map_err(io_err(&json))?;
            }
            write(out, csv.trim_end())?;
            match report.disagreements() {
                0 => Ok(()),
                d => Err(Failure::Disagree(d)),
            }
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Io(m) => (EXIT_IO, m),
                Failure::Solver(e @ (KcutError::Invariant(_) | KcutError::Overflow(_))) => {
                    (EXIT_INVARIANT, e.to_string())
                }
                Failure::Solver(e) => (EXIT_USAGE, e.to_string()),
                Failure::Disagree(d) => {
                    (EXIT_DISAGREE, format!("{d} rows disagree with the oracle"))
                }
            };
            let _ = writeln!(err, "kcut: {msg}");
            code
        }
    }
}
