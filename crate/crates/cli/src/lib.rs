//! Command-line front end for `wflow`: configuration, commands, and report formats.

pub mod commands;
pub mod config;
pub mod record;
pub mod scenario;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{ConfigError, Format};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] wflow_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => exit::CONFIG,
            AppError::Numerical(_) => exit::NUMERICAL,
            AppError::Io(_) => exit::IO,
            AppError::CheckFailed(_) => exit::CHECK_FAILED,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wflow", version, about = "Parallel Weingarten flows of isoparametric hypersurfaces")]
pub struct Cli {
    /// JSON configuration document.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for `sweep` (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Omit wall-clock timings so repeated runs produce identical files.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Override a configuration field: `/json/pointer=value`. Repeatable.
    #[arg(long = "set", global = true, value_name = "POINTER=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub tau0: Option<f64>,
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    /// Number of equally spaced trajectory samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one flow and write its trajectory.
    Simulate,
    /// Collapse time by quadrature, compared with the closed form when one exists.
    Collapse,
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
    },
    /// Collapse records over a Cartesian product of parameter ranges.
    Sweep {
        /// `/json/pointer=start:stop:count` or `/json/pointer=v1,v2,...`. Repeatable.
        #[arg(long = "range", value_name = "POINTER=RANGE", required = true)]
        ranges: Vec<String>,
    },
    /// Distance curve of a pair scenario and its monotonicity verdict.
    Avoidance,
    /// Print the family catalogue with principal-curvature formulas.
    Families {
        /// Hypersurface dimension n for the space-form rows.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

/// Runs the parsed command; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match commands::dispatch(cli) {
        Ok(()) => exit::OK,
        // a closed downstream pipe (`wflow simulate | head`) is not an error
        Err(AppError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => exit::OK,
        Err(e) => {
            eprintln!("wflow: {e}");
            e.exit_code()
        }
    }
}
