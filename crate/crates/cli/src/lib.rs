//! `stpred`: predictive densities, risk curves and example reproduction from
//! the command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 numeric-integrity error,
//! 3 reproduction threshold missed.

mod args;
mod commands;
mod output;
mod reproduce;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use args::{parse_delta_grid, parse_summary};
pub use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] stpred_core::Error),
    #[error("reproduction failed: {0}")]
    Reproduction(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use stpred_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(E::NumericIntegrity(_) | E::Infeasible(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Reproduction(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "stpred", version, about = "Skew-Student t predictive densities under restricted mean differences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Baseline and restricted predictive densities for a data set.
    Fit(FitArgs),
    /// Monte Carlo KL risk ratio of restricted over baseline along a Δ grid.
    RiskCurve(RiskArgs),
    /// Recompute both worked examples and both risk curves; exit 3 on a miss.
    Reproduce(ReproduceArgs),
    /// Density values of a distribution at given points.
    Eval(EvalArgs),
    /// Quantiles of a distribution.
    Quantile(QuantileArgs),
    /// Seeded draws from a distribution.
    Sample(SampleArgs),
    /// Exact posterior-predictive draws by rejection sampling.
    OracleSample(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RestrictionKind {
    Positive,
    Interval,
    None,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Inline summary `x1,x2,s,n`: group means, group-1 sd and group-1 size.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "data", required_unless_present = "data")]
    pub summary: Option<String>,
    /// CSV with header `group,value`.
    #[arg(long)]
    pub data: Option<std::path::PathBuf>,
    /// Override the degrees of freedom (default: n₁ - 1).
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct RestrictionArgs {
    #[arg(long, value_enum, default_value = "positive")]
    pub restriction: RestrictionKind,
    /// Half-width of the interval restriction.
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Print floats in shortest round-trip form instead of 6 significant digits.
    #[arg(long)]
    pub full_precision: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub restriction: RestrictionArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RiskArgs {
    #[command(flatten)]
    pub restriction: RestrictionArgs,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Grid `START:STOP:STEP` (default 0:5:0.5, or -m+1:m-1:0.5 capped at ±5 for intervals).
    #[arg(long, allow_hyphen_values = true)]
    pub deltas: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub nmc: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 100_000)]
    pub nmc: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Directory for the two risk-curve CSVs.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: reproduce::ReportFormat,
    #[arg(long)]
    pub full_precision: bool,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Parameter JSON `{family, p, nu, alpha0, alpha1, alpha2, xi, tau}`, or `@path`.
    #[arg(long)]
    pub params: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Comma-separated points.
    #[arg(long, allow_hyphen_values = true)]
    pub points: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Comma-separated probabilities in (0, 1).
    #[arg(long)]
    pub probs: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub restriction: RestrictionArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs a parsed command, writing results to `stdout` unless `--out` is given.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Fit(a) => commands::fit(&a, stdout),
        Command::RiskCurve(a) => commands::risk_curve(&a, stdout),
        Command::Reproduce(a) => reproduce::run(&a, stdout),
        Command::Eval(a) => commands::eval(&a, stdout),
        Command::Quantile(a) => commands::quantile(&a, stdout),
        Command::Sample(a) => commands::sample(&a, stdout),
        Command::OracleSample(a) => commands::oracle_sample(&a, stdout),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
