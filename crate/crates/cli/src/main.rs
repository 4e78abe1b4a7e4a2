//! `secrecy`: solve, generate and validate MIMO wiretap instances, and run experiment suites.

mod config;
mod error;
mod experiment;
mod generate;
mod solve;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "secrecy", version, about = "Secrecy capacity of Gaussian MIMO wiretap channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance and write the solution JSON and trace CSV.
    Solve(solve::SolveArgs),
    /// Run an experiment suite and write its CSV files.
    Experiment(experiment::ExperimentArgs),
    /// Draw a Kronecker channel and write it as JSON.
    Generate(generate::GenerateArgs),
    /// Check a solution against its channel and constraints.
    Validate(validate::ValidateArgs),
}

/// Kronecker channel parameters shared by `solve` and `generate`.
#[derive(Debug, Clone, Args)]
pub struct ChannelSpec {
    /// Transmit antennas.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Bob's receive antennas.
    #[arg(long)]
    pub nr: Option<usize>,
    /// Eve's receive antennas.
    #[arg(long)]
    pub ne: Option<usize>,
    /// Correlation magnitude in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// Correlation phase of Bob's channel (and Eve's unless --phi-e is given).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_e: Option<f64>,
    /// Eve's gain relative to Bob.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Primary receivers to draw for interference constraints.
    #[arg(long, default_value_t = 0)]
    pub np: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Transmit power limits, linear unless given through `--snr-db`.
#[derive(Debug, Clone, Args)]
pub struct PowerArgs {
    /// Sum-power limit P₀.
    #[arg(long, conflicts_with = "snr_db")]
    pub spc: Option<f64>,
    /// Sum-power limit as 10 log₁₀ P₀.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Comma-separated per-antenna limits.
    #[arg(long, value_delimiter = ',', conflicts_with = "papc_factor")]
    pub papc: Option<Vec<f64>>,
    /// Uniform per-antenna limits factor·P₀/N_t.
    #[arg(long)]
    pub papc_factor: Option<f64>,
    /// Interference limit applied to every primary receiver in the channel.
    #[arg(long)]
    pub ipc_limit: Option<f64>,
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Experiment(a) => experiment::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Validate(a) => validate::run(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

pub fn out_path(dir: &Option<PathBuf>, name: &str) -> PathBuf {
    dir.clone().unwrap_or_else(|| PathBuf::from(".")).join(name)
}
