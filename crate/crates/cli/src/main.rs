//! Batch analytics for bilateral gamma return models: boundary regression,
//! quantization, spectra, the equilibrium-rate Monte Carlo, risk-neutral
//! acceptance checks and per-record distribution statistics.
//!
//! Results are CSV tables on stdout (or `--out`); every stochastic command
//! requires an explicit `--seed` and reproduces byte-identical output for
//! identical inputs. Exit codes: 0 success, 1 validation error, 2 numeric
//! failure.

mod commands;
mod config;
mod errors;
mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::errors::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "bilgamma",
    version,
    about = "Bilateral gamma acceptance-set analytics"
)]
struct Cli {
    /// key=value file pre-setting flags of the invoked subcommand
    /// (command-line flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// write the output table to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a compensation boundary over risk vectors (sigma_p, mu_n, sigma_n)
    FitBounds(commands::fit_bounds::Args),
    /// Summarize a moments dataset by k representative points
    Quantize(commands::quantize::Args),
    /// PCA or diffusion-map eigenvalue spectrum of a moments dataset
    Spectrum(commands::spectrum::Args),
    /// Equilibrium-rate Monte Carlo, optionally swept over one moment
    Lucas(commands::lucas::Args),
    /// Risk-neutral scale-interval acceptance checks per record
    ConicCheck(commands::conic_check::Args),
    /// Parameter maps, Sharpe ratios and acceptability indexes per record
    BgStats(commands::bg_stats::Args),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help and version are not errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };

    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out = cli.out;
    match cli.command {
        Command::FitBounds(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::fit_bounds::run(args, out.as_ref())
        }
        Command::Quantize(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::quantize::run(args, out.as_ref())
        }
        Command::Spectrum(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::spectrum::run(args, out.as_ref())
        }
        Command::Lucas(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::lucas::run(args, out.as_ref())
        }
        Command::ConicCheck(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::conic_check::run(args, out.as_ref())
        }
        Command::BgStats(mut args) => {
            args.merge(&mut config)?;
            config.finish()?;
            commands::bg_stats::run(args, out.as_ref())
        }
    }
}

/// A `--seed` is mandatory for every stochastic command.
fn require_seed(seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| {
        CliError::Validation("--seed is required for stochastic commands".into())
    })
}

pub(crate) use require_seed as seed_or_err;
