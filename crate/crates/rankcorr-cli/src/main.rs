//! `rankcorr`: estimate rank correlation coefficients from CSV data,
//! evaluate the theoretical coefficients and asymptotic variances of the
//! supported bivariate families, reproduce the reference simulation tables
//! and benchmark the estimator fast paths.

mod bench;
mod csvio;
mod estimate;
mod manifest;
mod render;
mod table;
mod theory;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rankcorr::copulas::Family;
use rankcorr::Error as CoreError;

/// Exit codes: 0 success, 2 input parse, 3 data policy, 4 parameter,
/// 5 convergence.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn parameter(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::TiesPresent { .. } | CoreError::DegenerateSample { .. } => 3,
            CoreError::LengthMismatch { .. }
            | CoreError::SampleTooSmall { .. }
            | CoreError::InvalidRanks { .. } => 2,
            CoreError::ParameterOutOfRange { .. } | CoreError::MismatchedConfig(_) => 4,
            CoreError::NonFiniteIntegrand { .. } | CoreError::QuadratureNotConverged { .. } => 5,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(format!("io error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "rankcorr", version, about = "Rank correlation estimators, theory and table reproduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for the stochastic commands.
    #[arg(long, global = true, default_value_t = 2025)]
    seed: u64,

    /// Print the machine-readable JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the JSON record (manifest + results) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; the RANKCORR_THREADS environment variable overrides.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate all five coefficients from a CSV file.
    Estimate {
        /// CSV with at least two numeric columns; a non-numeric first row
        /// is treated as a header.
        csv: PathBuf,
        /// 1-based column pair to use, e.g. --cols 1,3 (default: first two).
        #[arg(long)]
        cols: Option<String>,
        /// Break tied values deterministically by input order instead of
        /// rejecting them.
        #[arg(long)]
        jitter: bool,
    },
    /// Theoretical coefficients and variance reports for one model.
    Theory {
        /// Model family: fgm, normal or pareto.
        #[arg(long)]
        model: Family,
        /// Dependence parameter.
        #[arg(long)]
        t: f64,
        /// Also report E r_n and E r~_n at this sample size.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Reproduce a reference table: 2.1, 2.2, 2.3 or 2.4.
    Table {
        #[arg(long)]
        reproduce: String,
        /// Replications per parameter (default 1000).
        #[arg(long)]
        reps: Option<usize>,
        /// Sample size per replication (default 1000).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Time the naive and fast estimator paths on random permutations.
    Bench {
        /// Sizes to time, e.g. --n 1000,10000.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        n: Vec<usize>,
        /// Which paths to run: naive, fast or both (default both).
        #[arg(long, default_value = "both")]
        algo: String,
    },
}

fn resolve_threads(cli_threads: Option<usize>) -> CliResult<Option<usize>> {
    match std::env::var("RANKCORR_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| CliError::parameter(format!("RANKCORR_THREADS = '{v}' is not a thread count")))?;
            Ok(Some(n))
        }
        Err(_) => Ok(cli_threads),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let ctx = manifest::OutputContext {
        argv,
        seed: cli.seed,
        json: cli.json,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Estimate { csv, cols, jitter } => estimate::run(&ctx, csv, cols.as_deref(), *jitter),
        Command::Theory { model, t, n } => theory::run(&ctx, *model, *t, *n),
        Command::Table { reproduce, reps, n } => table::run(
            &ctx,
            reproduce,
            reps.unwrap_or(1000),
            n.unwrap_or(1000),
            cli.seed,
        ),
        Command::Bench { n, algo } => bench::run(&ctx, n, algo),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    let result = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build();
            match pool {
                Ok(pool) => pool.install(|| run(cli)),
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
