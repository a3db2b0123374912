use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ehd_core::neutral::{Method, Solver};

#[derive(Debug, Parser)]
#[command(
    name = "ehd-neutral",
    version,
    about = "Neutral stability of EHD convection with temperature-dependent conductivity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic roots, Vieta residuals and bifurcation hits at (a, M, Ra).
    Roots(RootsArgs),
    /// Smallest Ra at a fixed wavenumber, or minimized over a bracket.
    Critical(CriticalArgs),
    /// Reproduce the published table with both bases and the oracle.
    Table1(OutputArgs),
    /// Critical points along a list of M values.
    Sweep(SweepArgs),
    /// Value of the secular function at (a, M, Ra).
    Secular(PointArgs),
    /// All secular roots in an Ra window.
    SolveRa(SolveRaArgs),
    /// Compare the direct, spectral and finite-difference methods at (a, M).
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    SecularDirect,
    SpectralLegendre,
    SpectralChebyshev,
    FdOracle,
}

impl MethodArg {
    pub fn solver(self, n: Option<usize>) -> Solver {
        match self {
            MethodArg::SecularDirect => Solver::secular(),
            MethodArg::SpectralLegendre => Solver::legendre(n.unwrap_or(16)),
            MethodArg::SpectralChebyshev => Solver::chebyshev(n.unwrap_or(16)),
            MethodArg::FdOracle => Solver::fd(n.unwrap_or(2000)),
        }
    }

    pub fn method(self) -> Method {
        self.solver(None).method
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: f64,
    #[arg(long = "Ra", allow_hyphen_values = true)]
    pub ra: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Relative distance below which roots are merged.
    #[arg(long, value_parser = positive)]
    pub cluster_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "spectral-legendre")]
    pub method: MethodArg,
    /// Truncation (spectral) or grid size (fd-oracle).
    #[arg(long = "N")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a_lo: f64,
    #[arg(long, default_value_t = 8.0)]
    pub a_hi: f64,
    /// Width of the final wavenumber interval.
    #[arg(long, value_parser = positive)]
    pub a_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    /// Solve at this wavenumber instead of minimizing.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub bracket: BracketArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated, strictly ascending.
    #[arg(
        long = "M",
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub m: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub bracket: BracketArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Also write `<PREFIX>.ra.dat` (M, Ra_min) and `<PREFIX>.a.dat` (M, a_c).
    #[arg(long, value_name = "PREFIX")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveRaArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub ra_lo: f64,
    #[arg(long)]
    pub ra_hi: f64,
    #[arg(long, value_parser = positive)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive (got {s})"))
    }
}
