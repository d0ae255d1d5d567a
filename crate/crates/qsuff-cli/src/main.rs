//! `qsuff` command line: reads a problem file, runs the requested analysis,
//! and writes a single report document to stdout or `--output`.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 invalid state or
//! algebra, 4 resource limit, 5 internal inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsuff::analysis;
use qsuff::problem::{Problem, ProblemFile};
use qsuff::{Error, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "qsuff",
    version,
    about = "Subalgebra sufficiency verdicts and error exponents for binary quantum state discrimination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file to read.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the report; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the file's verdict tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the file's prior-grid size.
    #[arg(long)]
    lambda_grid: Option<usize>,
    /// Override the file's tensor-power dimension cap.
    #[arg(long)]
    tensor_cap: Option<usize>,
    /// Override the file's sampling seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on the problem and emit the full report.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate n-copy minimum Bayes errors against the Chernoff exponent.
    ChernoffCurve {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest tensor power to evaluate.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Sample the optimal test under both states and compare with theory.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Prior weight of the alternative state.
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Measurement shots per state.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
    /// Dump the threshold-test projections at a given likelihood threshold.
    NpTest {
        #[command(flatten)]
        common: CommonArgs,
        /// Likelihood-ratio threshold.
        #[arg(long)]
        t: f64,
    },
    /// Report full and restricted relative entropies.
    Entropies {
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Analyze { common }
            | Command::ChernoffCurve { common, .. }
            | Command::Simulate { common, .. }
            | Command::NpTest { common, .. }
            | Command::Entropies { common } => common,
        }
    }
}

/// Entropy document for the `entropies` subcommand; the other subcommands'
/// reports already carry the options echo.
#[derive(Serialize)]
struct EntropiesOut {
    options: qsuff::problem::Options,
    #[serde(flatten)]
    report: analysis::EntropyReport,
}

fn load_problem(common: &CommonArgs) -> Result<Problem> {
    let bytes = std::fs::read(&common.input)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", common.input.display())))?;
    let mut file = ProblemFile::from_slice(&bytes)?;
    if let Some(tol) = common.tol {
        file.options.tol = tol;
    }
    if let Some(n) = common.lambda_grid {
        file.options.lambda_grid = n;
    }
    if let Some(cap) = common.tensor_cap {
        file.options.tensor_cap = cap;
    }
    if let Some(seed) = common.seed {
        file.options.seed = seed;
    }
    file.validate()
}

fn emit<T: Serialize>(common: &CommonArgs, report: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InternalInconsistency(format!("report serialization failed: {e}")))?;
    text.push('\n');
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let common = cli.command.common();
    let problem = load_problem(common)?;
    match &cli.command {
        Command::Analyze { .. } => emit(common, &analysis::analyze(&problem)?),
        Command::ChernoffCurve { n_max, .. } => {
            emit(common, &analysis::chernoff_curve(&problem, *n_max)?)
        }
        Command::Simulate { lambda, shots, .. } => emit(
            common,
            &analysis::simulate(&problem, *lambda, *shots, problem.options.seed)?,
        ),
        Command::NpTest { t, .. } => emit(common, &analysis::np_test(&problem, *t)?),
        Command::Entropies { .. } => emit(
            common,
            &EntropiesOut {
                options: problem.options,
                report: analysis::entropies(&problem)?,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
