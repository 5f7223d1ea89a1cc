//! Command-line front end for the oscillator series library.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "anharmonic",
    about = "Sin-power and Taylor series solutions of anharmonic oscillators",
    version
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub(crate) command: Command,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Compute series coefficients (and optionally a sampled trajectory).
    Solve(SolveArgs),
    /// Compute the period by quadrature, closed form or calibration.
    Period(PeriodArgs),
    /// Run the invariant checks for a problem (or the randomized suite).
    Verify(VerifyArgs),
    /// Evaluate the decay-bound constants, proof-function scans and the
    /// cubic admissible constant.
    Bounds(BoundsArgs),
    /// Tabulate series, Taylor and integrator values with errors.
    Compare(CompareArgs),
    /// Sweep one parameter and tabulate period, frequency and decay.
    Sweep(SweepArgs),
    /// Execute a command described by a JSON config file.
    Run(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationKind {
    Quadratic,
    Cubic,
    CubicNormalized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FreqMode {
    /// The equation's own frequency symbol (reproduces the printed
    /// coefficient formulas; the series does not converge).
    Paper,
    /// pi / T with T from quadrature (default).
    Period,
    /// Tail-growth calibration.
    Calibrated,
    /// Explicit value from --omega-series.
    Fixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Sin,
    Taylor,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeriodMethodArg {
    Quadrature,
    ClosedForm,
    Calibrated,
}

#[derive(Args, Clone)]
pub struct EquationArgs {
    /// Named equation form.
    #[arg(long, value_enum, conflicts_with = "raw")]
    pub equation: Option<EquationKind>,
    /// Frequency parameter of the named equation.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Nonlinearity strength of the named equation.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Initial amplitude of the named equation.
    #[arg(long, allow_negative_numbers = true)]
    pub a0: Option<f64>,
    /// Specify raw coefficients instead of a named equation.
    #[arg(long)]
    pub raw: bool,
    #[arg(long = "A", default_value_t = 0.0, allow_negative_numbers = true)]
    pub coef_a: f64,
    #[arg(long = "B", default_value_t = 0.0, allow_negative_numbers = true)]
    pub coef_b: f64,
    #[arg(long = "C", default_value_t = 0.0, allow_negative_numbers = true)]
    pub coef_c: f64,
    #[arg(long = "D", default_value_t = 0.0, allow_negative_numbers = true)]
    pub coef_d: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Truncation order N of the series (per-command default when omitted).
    #[arg(long)]
    pub terms: Option<usize>,
    /// How to choose the series frequency Omega.
    #[arg(long, value_enum, default_value_t = FreqMode::Period)]
    pub freq: FreqMode,
    /// Explicit Omega for --freq fixed.
    #[arg(long, allow_negative_numbers = true)]
    pub omega_series: Option<f64>,
    /// Integrator tolerance for oracle comparisons.
    #[arg(long, default_value_t = 1e-11, allow_negative_numbers = true)]
    pub tol: f64,
    /// Seed for the randomized verification grids.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Suppress per-check progress lines on stderr.
    #[arg(long)]
    pub quiet: bool,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which expansion to emit.
    #[arg(long, value_enum, default_value_t = SeriesKind::Sin)]
    pub series: SeriesKind,
    /// Also sample the series at this many points over one period.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Where to write the sampled trajectory CSV (requires --samples).
    #[arg(long, requires = "samples")]
    pub samples_out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct PeriodArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = PeriodMethodArg::Quadrature)]
    pub method: PeriodMethodArg,
    /// Initial Gauss-Legendre node count.
    #[arg(long, default_value_t = 16)]
    pub nodes: usize,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Run the randomized cross-problem suite instead of one problem.
    #[arg(long)]
    pub suite: bool,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.45, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta_over_omega2: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c1: f64,
    /// Largest p for the pointwise scans.
    #[arg(long, default_value_t = 10_000)]
    pub p_max: usize,
}

#[derive(Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sample count over the comparison window.
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    /// Comparison window (one period when omitted).
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which named-equation parameter to sweep.
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
}

#[derive(Args)]
pub struct RunArgs {
    /// JSON config mirroring the flag set ({"command": "...", ...}).
    #[arg(long)]
    pub config: std::path::PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => commands::cmd_solve(&args),
        Command::Period(args) => commands::cmd_period(&args),
        Command::Verify(args) => commands::cmd_verify(&args),
        Command::Bounds(args) => commands::cmd_bounds(&args),
        Command::Compare(args) => commands::cmd_compare(&args),
        Command::Sweep(args) => commands::cmd_sweep(&args),
        Command::Run(args) => config::cmd_run(&args),
    };
    ExitCode::from(code)
}
