mod config;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use error::CliError;
use run::Outcome;

/// Pseudo-spectral NLS experiments with conservation-law and identity checks.
#[derive(Parser, Debug)]
#[command(name = "nls-conserve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve the initial datum and write the observable time series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evolve and evaluate the configured identity checks.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Repeat verify with dt halved per level and fit convergence orders.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        /// Number of levels; defaults to `refinement_levels` from the config.
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Print every registered identity with its anchor.
    ListIdentities,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("NLS_CONSERVE_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Config(format!("NLS_CONSERVE_THREADS must be a positive integer, got {value:?}"))
        })?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| CliError::Config(e.to_string()))
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    configure_threads()?;
    match command {
        Command::Simulate { config } => run::simulate(&ExperimentConfig::load(&config)?),
        Command::Verify { config } => run::verify(&ExperimentConfig::load(&config)?),
        Command::Convergence { config, levels } => {
            let cfg = ExperimentConfig::load(&config)?;
            let levels = levels.unwrap_or(cfg.refinement_levels);
            run::convergence(&cfg, levels)
        }
        Command::ListIdentities => {
            run::list_identities();
            Ok(Outcome::Passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
