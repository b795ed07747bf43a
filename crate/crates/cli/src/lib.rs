//! Command-line front end: parameter loading, sweeps, CSV/JSON/SVG output and
//! the self-verification table.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use config::{load_params, parse_params, ParamFlags, CONFIG_ENV};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<atomcavity::Error> for CliError {
    fn from(e: atomcavity::Error) -> Self {
        match e {
            atomcavity::Error::InvalidParameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "atomcavity",
    version,
    about = "Squeezing spectra and optomechanical entanglement of an atom-mirror cavity"
)]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Excitation case: sets both the effective atomic detuning and decay.
#[derive(Debug, Clone, clap::Args)]
pub struct CaseArgs {
    /// Preset with delta_r = gamma_r = CASE (the figures use 1, 2.5 and 8)
    #[arg(long)]
    pub case: Option<f64>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// CSV destination (stdout when absent)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// SVG plot destination
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steady-state amplitudes and mirror displacement
    Steady {
        /// Print a single JSON record instead of text
        #[arg(long)]
        json: bool,
    },
    /// Output intensity squeezing spectrum
    Spectrum {
        #[command(flatten)]
        case: CaseArgs,
        /// Coupling in units of kappa; repeat for several columns
        #[arg(long = "g", value_name = "G")]
        g: Vec<f64>,
        /// Lowest frequency [units of omega_m]
        #[arg(long, default_value_t = 0.5)]
        omega_min: f64,
        /// Highest frequency [units of omega_m]
        #[arg(long, default_value_t = 1.5)]
        omega_max: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Logarithmic negativity between mirror and cavity field versus detuning
    Entangle {
        #[command(flatten)]
        case: CaseArgs,
        /// Coupling in units of kappa
        #[arg(long = "g", value_name = "G")]
        g: Option<f64>,
        /// Lowest detuning [units of omega_m]
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta_min: f64,
        /// Highest detuning [units of omega_m]
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        delta_max: f64,
        #[arg(long, default_value_t = 500)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the CSV and SVG files of one figure
    Reproduce {
        figure: Figure,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
        /// Grid points per panel
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run the numerical self-checks and print a pass/fail table
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Randomized points for the transfer-function comparison
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Use the closed-form transfer functions exactly as printed (mutation fixture)
        #[arg(long, hide = true)]
        appendix_as_printed: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

/// Runs a parsed command line on a pool of `cli.jobs` workers.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| CliError::Numeric(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::dispatch(cli))
}
