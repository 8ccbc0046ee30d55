//! `ecs-qfi`: QFI sweeps, oracle verification and precision-limit crossings
//! for entangled coherent states under photon loss.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ecs-qfi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic QFI and the three limits over an R grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// R grid: start:stop:step (inclusive) or a comma list.
        #[arg(long = "r", default_value = "0:1:0.01")]
        grid: String,
    },
    /// Compare the analytic QFI with the Fock-space oracle and the two
    /// rank-2 eigen-solvers against each other.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "r", default_value = "0:0.9:0.1")]
        grid: String,
        /// Force the per-mode Fock cutoff instead of choosing it adaptively.
        #[arg(long)]
        truncation: Option<usize>,
        /// Relative QFI threshold.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Cap on the Fock-space dimension.
        #[arg(long, env = "QFI_MAX_DIM", default_value_t = 1_000_000)]
        max_dim: usize,
    },
    /// Reflection coefficients where F meets the Hofmann, Heisenberg and
    /// shot-noise limits.
    Crossings {
        #[command(flatten)]
        common: Common,
        /// Bisection bracket width in R.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct Common {
    /// Magnitude of the coherent amplitude.
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Phase of the coherent amplitude in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_phase: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numeric(String),
    Threshold(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Threshold(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep { common, grid } => {
            commands::sweep(&common.settings(Format::Csv), &grid)
        }
        Command::Verify {
            common,
            grid,
            truncation,
            tolerance,
            max_dim,
        } => commands::verify(
            &common.settings(Format::Json),
            &grid,
            commands::VerifyOptions {
                truncation,
                qfi_threshold: tolerance,
                max_dim,
            },
        ),
        Command::Crossings { common, tolerance } => {
            commands::crossings(&common.settings(Format::Json), tolerance)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Config(m) => ("configuration error", m),
                Failure::Numeric(m) => ("numeric failure", m),
                Failure::Threshold(m) => ("verification failed", m),
            };
            eprintln!("ecs-qfi: {kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}

pub struct Settings {
    pub alpha: f64,
    pub alpha_phase: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Common {
    fn settings(self, default_format: Format) -> Settings {
        Settings {
            alpha: self.alpha,
            alpha_phase: self.alpha_phase,
            out: self.out,
            format: self.format.unwrap_or(default_format),
        }
    }
}
