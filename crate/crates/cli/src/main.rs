//! `lchi` — batch driver for central-value experiments over the family of
//! real quadratic characters with prime conductor p ≡ 1 (mod 8).

mod cache;
mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::CommonOpts;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Suite(String),
    #[error("resource error: {0}")]
    Resource(String),
}

impl From<lchi_core::Error> for CliError {
    fn from(e: lchi_core::Error) -> Self {
        match e {
            lchi_core::Error::Config(m) | lchi_core::Error::Domain(m) | lchi_core::Error::Range(m) => {
                CliError::Config(m)
            }
            lchi_core::Error::Numerical(m) => CliError::Suite(m),
            lchi_core::Error::Resource(m) => CliError::Resource(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Suite(_) => 1,
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "lchi", version, about = "central values of L(1/2, chi_p) for p = 1 mod 8")]
struct Cli {
    #[command(flatten)]
    opts: CommonOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate L(1/2, chi_p) for every prime p = 1 mod 8 up to X; write
    /// per-prime CSV and a summary JSON against the proven nonvanishing floor
    Census,
    /// Compute the moment sums S1, S2, M2, M3 (and optionally M_{a1,a2})
    /// against their predicted main terms
    Moments {
        /// first shift exponent (requires --alpha2)
        #[arg(long, requires = "alpha2")]
        alpha1: Option<f64>,
        /// second shift exponent, alpha1 <= alpha2
        #[arg(long, requires = "alpha1")]
        alpha2: Option<f64>,
    },
    /// Run the exact-identity suites; nonzero exit on any failure
    Verify,
    /// Print theta0, rho(theta0), the constant c, and the rho curve as CSV
    Optimize,
    /// Evaluate L(1/2, chi_p) for one conductor
    Lvalue {
        /// prime conductor, p = 1 mod 8
        #[arg(long)]
        p: u64,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = config::resolve(&cli.opts)?;
    match &cli.command {
        Command::Census => commands::cmd_census(&cfg),
        Command::Moments { alpha1, alpha2 } => {
            let alpha = match (alpha1, alpha2) {
                (Some(a), Some(b)) => Some((*a, *b)),
                _ => None,
            };
            commands::cmd_moments(&cfg, alpha)
        }
        Command::Verify => commands::cmd_verify(&cfg),
        Command::Optimize => commands::cmd_optimize(&cfg),
        Command::Lvalue { p } => commands::cmd_lvalue(&cfg, *p),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
