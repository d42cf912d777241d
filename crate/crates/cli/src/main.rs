//! `e2zeros`: zeros of E2, their atlas, expansion tables, certification runs
//! and plots.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use e2zeros::expansions::{DEFAULT_FOURIER_NMAX, DEFAULT_NODES, DEFAULT_SERIES_ORDER};
use e2zeros::zero_atlas::DEFAULT_CMAX;

#[derive(Debug, Parser)]
#[command(name = "e2zeros", version, about = "Zeros of the Eisenstein series E2")]
struct Cli {
    /// Requested accuracy in decimal digits (at least 30).
    #[arg(long, global = true, env = "E2ZEROS_DIGITS", default_value_t = 60)]
    digits: u32,

    /// Largest cusp denominator for atlas and zeros plot.
    #[arg(long, global = true, env = "E2ZEROS_CMAX", default_value_t = DEFAULT_CMAX)]
    cmax: i64,

    /// Order of the exact H~ series.
    #[arg(long, global = true, env = "E2ZEROS_ORDER", default_value_t = DEFAULT_SERIES_ORDER)]
    order: usize,

    /// Largest Fourier index.
    #[arg(long, global = true, env = "E2ZEROS_NMAX", default_value_t = DEFAULT_FOURIER_NMAX)]
    nmax: usize,

    /// Sample count for the numerical Fourier coefficients.
    #[arg(long, global = true, env = "E2ZEROS_NODES", default_value_t = DEFAULT_NODES)]
    nodes: usize,

    /// Output directory for files.
    #[arg(long, global = true, env = "E2ZEROS_OUT", default_value = ".")]
    out: PathBuf,

    /// Record format for `zero` and `atlas`.
    #[arg(long, global = true, env = "E2ZEROS_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Locate the zero in the Ford circle of a/c and print its record.
    Zero {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        c: i64,
    },
    /// Locate every zero with c <= cmax and write atlas.json or atlas.csv.
    Atlas,
    /// Compute H~, the Fourier and Taylor tables and a_n; write expansions.json.
    Expansions,
    /// Run the inequality checks and the bootstrap; write certify.json.
    Certify,
    /// Write an SVG plot.
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Zeros,
    Hloop,
    Taylorfit,
}

/// Validated run settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub digits: u32,
    pub cmax: i64,
    pub series_order: usize,
    pub fourier_nmax: usize,
    pub nodes: usize,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        if cli.digits < 30 {
            return Err(CliError::Usage(format!(
                "--digits must be at least 30, got {}",
                cli.digits
            )));
        }
        if cli.cmax < 1 {
            return Err(CliError::Usage(format!(
                "--cmax must be at least 1, got {}",
                cli.cmax
            )));
        }
        Ok(RunConfig {
            digits: cli.digits,
            cmax: cli.cmax,
            series_order: cli.order,
            fourier_nmax: cli.nmax,
            nodes: cli.nodes,
            out: cli.out.clone(),
            format: cli.format,
        })
    }

    pub fn precision(&self) -> e2zeros::Precision {
        e2zeros::Precision::new(self.digits)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] e2zeros::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(e2zeros::Error::InvalidCusp { .. }) => 2,
            CliError::Core(_) => 3,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|cfg| match cli.command {
        Command::Zero { a, c } => commands::zero(&cfg, a, c),
        Command::Atlas => commands::atlas(&cfg),
        Command::Expansions => commands::expansions(&cfg),
        Command::Certify => commands::certify(&cfg),
        Command::Plot { kind } => commands::plot(&cfg, kind),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
