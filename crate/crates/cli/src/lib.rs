//! Command-line front end: parses arguments, runs the solvers from
//! `ehd-core`, and renders fixed-format CSV/JSON.

pub mod args;
mod commands;
pub mod output;

use std::io;
use std::process::ExitCode;

use clap::Parser;

pub use commands::{TABLE1_FLAG_TOL, TABLE1_ORACLE_GRID, TABLE1_SCP_N, TABLE1_SLP_N};

/// Caps the rayon pool; `0` or unset means one thread per core.
pub const THREADS_ENV: &str = "EHD_NEUTRAL_THREADS";

#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameter values (exit 2).
    Usage(String),
    /// A solver failed (exit 3).
    Numerical(String),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) | Failure::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "io: {e}"),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::Usage(format!(
            "{THREADS_ENV} must be a non-negative integer (got {raw:?})"
        ))
    })?;
    // A pool built earlier in the same process is kept.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

pub fn run(cli: args::Cli) -> Result<(), Failure> {
    use args::Command::*;
    configure_threads()?;
    match &cli.command {
        Roots(a) => commands::roots(a),
        Critical(a) => commands::critical(a),
        Table1(a) => commands::table1(a),
        Sweep(a) => commands::sweep(a),
        Secular(a) => commands::secular(a),
        SolveRa(a) => commands::solve_ra_cmd(a),
        Validate(a) => commands::validate(a),
    }
}

pub fn main_with_args() -> ExitCode {
    let cli = args::Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
