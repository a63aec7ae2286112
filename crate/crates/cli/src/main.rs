use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Runtime(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<corrmac_core::Error> for CliError {
    fn from(e: corrmac_core::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

/// Experiments on orthogonal multiple access with correlated sources.
#[derive(Debug, Parser)]
#[command(name = "corrmac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct CommonArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Joint entropies, characteristic points and boundary projections.
    Region(CommonArgs),
    /// Monte Carlo BER of joint decoding over an SNR grid.
    Ber(CommonArgs),
    /// EXIT search for the balanced and unbalanced points of concrete codes.
    Exit(CommonArgs),
    /// Builds a code and writes it to disk.
    BuildCode(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Region(a) => ("region", a),
        Command::Ber(a) => ("ber", a),
        Command::Exit(a) => ("exit", a),
        Command::BuildCode(a) => ("build-code", a),
    };
    let result = config::ExperimentConfig::load(&args.config).and_then(|cfg| {
        let ctx = commands::Context::new(name, cfg, args.seed, args.out.clone())?;
        match cli.command {
            Command::Region(_) => commands::run_region(&ctx),
            Command::Ber(_) => commands::run_ber(&ctx),
            Command::Exit(_) => commands::run_exit(&ctx),
            Command::BuildCode(_) => commands::run_build_code(&ctx),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("corrmac {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
