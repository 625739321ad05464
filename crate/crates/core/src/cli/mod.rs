//! The `homshift` command line: weight tables, verification suites, the
//! `m = −1` classifier and parameter sweeps.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parameter
//! error, 3 numerical failure (singular solve, overflow, non-finite values).

mod commands;
mod setup;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;

pub use setup::{OpKind, Series};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "homshift", version, about = "Homogeneous weighted shifts and their associated representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orthonormal-basis weight sequence of a canonical shift.
    Weights(WeightsArgs),
    /// Run a verification suite and print one report per check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Classify an m = -1 coefficient sequence read from a CSV file.
    Classify(ClassifyArgs),
    /// Run verification suites over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Homogeneity,
    Unitarity,
    Infinitesimal,
    ReducibleLambda,
    Normalizer,
    Lemmas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Series selection shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long, value_enum, default_value = "holo")]
    pub series: Series,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Real μ for the complementary series.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Im μ for the principal series; Re μ is (1 − λ)/2.
    #[arg(long = "mu-im", default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu_im: f64,
    /// Coupling of the reducible shift (real part).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long = "r-im", default_value_t = 0.0, allow_negative_numbers = true)]
    pub r_im: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub n0: i64,
    #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
    pub n1: i64,
    /// Shift branch for the principal and complementary series.
    #[arg(long, default_value = "T2")]
    pub branch: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowArgs {
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub pad: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Group path such as `L:0.1,M:-0.05,h:0.2`.
    #[arg(long, default_value = "L:0.1")]
    pub path: String,
    #[arg(long, value_enum)]
    pub op: Option<OpKind>,
    /// Multiply the operator by this factor.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub scale: f64,
    /// Override the suite's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Finite-difference step for the infinitesimal suite.
    #[arg(long, default_value_t = crate::homogeneity::DEFAULT_FD_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    /// CSV rows `n, re(a_n)[, im(a_n)]`; a header row is allowed.
    #[arg(long)]
    pub file: PathBuf,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "principal")]
    pub series: Series,
    /// λ grid, either `a,b,c` or `start:stop:step`.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub lambdas: String,
    /// Im μ values for the principal series.
    #[arg(long = "mu-ims", default_value = "0.5", allow_hyphen_values = true)]
    pub mu_ims: String,
    /// Real μ values for the complementary series; midpoint of the legal
    /// interval when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub mus: Option<String>,
    /// Comma-separated suites run in every cell.
    #[arg(long, default_value = "homogeneity,unitarity")]
    pub suites: String,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value = "L:0.1")]
    pub path: String,
    #[arg(long, value_enum)]
    pub op: Option<OpKind>,
}

/// Parse `args` (including the program name) and run, writing reports to `out`
/// and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::Weights(a) => commands::cmd_weights(a, out),
        Command::Verify { suite, args } => commands::cmd_verify(*suite, args, out),
        Command::Classify(a) => commands::cmd_classify(a, out),
        Command::Sweep(a) => commands::cmd_sweep(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
