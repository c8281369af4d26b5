//! `driftlab` command-line front end.
//!
//! Exit codes: 0 success, 1 fixture check failed, 2 invalid input or usage,
//! 3 I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use driftlab::experiments::{FIXTURE_MU, FIXTURE_SIGMA, FIXTURE_T, FIXTURE_TOLERANCE, FIXTURE_X0};
use driftlab::simulator::{DEFAULT_DT, DEFAULT_TERMS};
use driftlab::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "driftlab",
    version,
    about = "Wiener process with drift: simulation and estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate trajectories or observations.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Estimate parameters from a CSV sample.
    #[command(subcommand)]
    Estimate(Estimate),
    /// Reproduce the published tables and convergence experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ProcessArgs {
    #[arg(long, default_value_t = FIXTURE_X0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = FIXTURE_MU, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = FIXTURE_SIGMA, allow_negative_numbers = true)]
    pub sigma: f64,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct RandomArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Truncation depth of the sine series.
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    pub terms: usize,
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Series trajectories on [0, 1], wide CSV `t,path_1,...`.
    Paths {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write each trajectory to `<dir>/path_<k>.csv` as `t,x`.
        #[arg(long, value_name = "DIR")]
        per_path_files: Option<PathBuf>,
    },
    /// Observations at time `t` (`k,z`), or at `t` and `t2` (`k,z1,z2`).
    Marginal {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = FIXTURE_T, allow_negative_numbers = true)]
        t: f64,
        /// Second observation time; switches output to a paired sample.
        #[arg(long, allow_negative_numbers = true)]
        t2: Option<f64>,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Evaluate series trajectories instead of sampling the exact law.
        #[arg(long)]
        series: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SampleInput {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Entries of the running estimate discarded before the tail min/max
    /// (default: half the sample).
    #[arg(long)]
    pub burn_in: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Estimate {
    /// sigma^2 with x0 and mu known.
    Sigma2 {
        #[command(flatten)]
        sample: SampleInput,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
    },
    /// mu with x0 known.
    Mu {
        #[command(flatten)]
        sample: SampleInput,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
    },
    /// x0 with mu known.
    X0 {
        #[command(flatten)]
        sample: SampleInput,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
    },
    /// (x0, mu) from a paired sample `k,z1,z2`.
    Joint {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, allow_negative_numbers = true)]
        t2: f64,
        #[arg(long)]
        burn_in: Option<usize>,
    },
    /// (x0, mu) from a paired sample, then sigma^2 from a further sample.
    Pipeline {
        #[arg(long, value_name = "FILE")]
        paired: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, allow_negative_numbers = true)]
        t2: f64,
        #[arg(long, value_name = "FILE")]
        extra: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t_extra: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Sigma2,
    Mu,
    X0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Sigma2,
    Mu,
    X0,
    JointX0,
    JointMu,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Regenerate a sample in the regime of the published 100-value table.
    Table41 {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = FIXTURE_T, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimates on growing prefixes, CSV `n,estimate,true_value`.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepKind::Sigma2)]
        estimator: SweepKind,
        /// Sample `k,z`; defaults to the embedded published sample.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = FIXTURE_T, allow_negative_numbers = true)]
        t: f64,
        /// Comma-separated prefix sizes (default 5, 10, ... up to 100).
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the embedded sample against the published estimate tables.
    Fixture {
        #[arg(long, default_value_t = FIXTURE_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo RMSE at n = 10, 100, ..., n_max; CSV `n,rmse`.
    Rmse {
        #[arg(long, value_enum, default_value_t = CurveKind::Sigma2)]
        estimator: CurveKind,
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = FIXTURE_T, allow_negative_numbers = true)]
        t: f64,
        /// Second observation time for the joint estimator.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t2: f64,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        replications: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run replications on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            let rendered = err.to_string();
            let line = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
