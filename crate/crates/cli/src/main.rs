//! `polylip` — exact workbench for Lipschitz analysis of polyhedral
//! convex data: evaluators, cone criteria, sampling oracles, and 2-D
//! plots, driven by JSON instance files.
//!
//! Exit codes: 0 success (per-query failures are recorded in the
//! report), 2 input error (unreadable file, parse error, dangling name,
//! dimension clash), 3 unsupported or out-of-domain invocation, 4
//! internal invariant breach.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use polylip::oracle::SamplingPlan;

use polylip_cli::queries::OpClass;
use polylip_cli::report::Report;
use polylip_cli::{instance, plot, queries};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "polylip",
    version,
    about = "Exact variational analysis on polyhedral convex data"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate gauges, distances, minimal times, projections, and
    /// generalized-differentiation objects exactly.
    Eval { file: PathBuf },
    /// Run the cone-based Lipschitz and Aubin criteria and the
    /// subdifferential inclusion audits.
    Check { file: PathBuf },
    /// Run the independent sampling oracles against the same queries.
    Verify {
        file: PathBuf,
        /// Seed for the deterministic sampling plan.
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Number of dyadic radii 2^-k to sweep (at least 4).
        #[arg(long, default_value_t = 12)]
        radii: usize,
        /// Number of sample directions per radius (at least 1).
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Render one two-dimensional query to SVG.
    Plot2d {
        file: PathBuf,
        /// Query id to draw.
        #[arg(long)]
        query: String,
        /// Output SVG path.
        #[arg(short, long)]
        out: PathBuf,
    },
}

const EXIT_OK: i32 = 0;
const EXIT_INPUT: i32 = 2;
const EXIT_UNSUPPORTED: i32 = 3;
const EXIT_INTERNAL: i32 = 4;

fn main() {
    std::process::exit(run());
}

fn load(path: &PathBuf) -> Result<(instance::Instance, String), String> {
    let bytes = std::fs::read(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let hash = format!("sha256:{:x}", Sha256::digest(&bytes));
    let parsed: instance::InstanceIn = serde_json::from_slice(&bytes)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let resolved = instance::resolve(&parsed).map_err(|e| format!("{}: {e}", path.display()))?;
    queries::validate(&resolved).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((resolved, hash))
}

fn emit(report: &Report, format: Format) {
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    print!("{rendered}");
}

fn run_batch(path: &PathBuf, class: OpClass, plan: SamplingPlan, format: Format) -> i32 {
    let (instance, hash) = match load(path) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("input error: {msg}");
            return EXIT_INPUT;
        }
    };
    let mut report = Report::new(class.command(), hash, plan.seed);
    match queries::run_queries(&instance, class, plan, &mut report) {
        Ok(()) => {
            emit(&report, format);
            EXIT_OK
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn run() -> i32 {
    let cli = Cli::parse();
    match &cli.command {
        Command::Eval { file } => {
            run_batch(file, OpClass::Eval, SamplingPlan::default(), cli.format)
        }
        Command::Check { file } => {
            run_batch(file, OpClass::Check, SamplingPlan::default(), cli.format)
        }
        Command::Verify {
            file,
            seed,
            radii,
            samples,
        } => {
            if *radii < 4 || *samples == 0 {
                eprintln!(
                    "input error: the sampling plan needs at least 4 radii and 1 sample \
                     (got --radii {radii} --samples {samples})"
                );
                return EXIT_INPUT;
            }
            let plan = SamplingPlan {
                seed: *seed,
                radii: *radii,
                samples: *samples,
                norm: polylip::Norm::LInf,
            };
            run_batch(file, OpClass::Verify, plan, cli.format)
        }
        Command::Plot2d { file, query, out } => {
            let (instance, _hash) = match load(file) {
                Ok(v) => v,
                Err(msg) => {
                    eprintln!("input error: {msg}");
                    return EXIT_INPUT;
                }
            };
            match plot::render(&instance, query) {
                Ok(svg) => {
                    let write = std::fs::File::create(out)
                        .and_then(|mut f| f.write_all(svg.as_bytes()));
                    match write {
                        Ok(()) => EXIT_OK,
                        Err(e) => {
                            eprintln!("input error: cannot write {}: {e}", out.display());
                            EXIT_INPUT
                        }
                    }
                }
                Err(e) if e.input => {
                    eprintln!("input error: {}", e.message);
                    EXIT_INPUT
                }
                Err(e) => {
                    eprintln!("unsupported: {}", e.message);
                    EXIT_UNSUPPORTED
                }
            }
        }
    }
}
