//! Per-record parameter maps, Sharpe ratios and acceptability indexes.

use std::path::PathBuf;

use clap::Parser;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use bilgamma_core::bg::{params_from_moments, sample};
use bilgamma_core::distortion::{acceptability_index, sharpe_ratio, Position};

use crate::config::Config;
use crate::errors::{numeric, CliResult};
use crate::io::{fmt_float, load_moments, Table};
use crate::seed_or_err;

#[derive(Debug, Parser)]
pub struct Args {
    /// moments CSV (ticker, date, mu_p, sigma_p, mu_n, sigma_n)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// sample paths per record for the acceptability index
    #[arg(long)]
    pub paths: Option<usize>,
    /// sampling horizon in years
    #[arg(long)]
    pub horizon: Option<f64>,
    /// trading days in the Sharpe-ratio annualization
    #[arg(long)]
    pub days: Option<f64>,
    /// master seed; per-record seeds derive from it
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Args {
    pub fn merge(&mut self, config: &mut Config) -> CliResult<()> {
        config.fill("input", &mut self.input)?;
        config.fill("paths", &mut self.paths)?;
        config.fill("horizon", &mut self.horizon)?;
        config.fill("days", &mut self.days)?;
        config.fill("seed", &mut self.seed)?;
        Ok(())
    }
}

pub fn run(args: Args, out: Option<&PathBuf>) -> CliResult<()> {
    let input = args.input.ok_or_else(|| {
        crate::errors::CliError::Validation("--input is required".into())
    })?;
    let seed = seed_or_err(args.seed)?;
    let paths = args.paths.unwrap_or(100_000);
    let horizon = args.horizon.unwrap_or(1.0);
    let days = args
        .days
        .unwrap_or(bilgamma_core::distortion::DEFAULT_TRADING_DAYS);

    let records = load_moments(&input)?;
    let mut master = ChaCha12Rng::seed_from_u64(seed);

    let mut table = Table::new(&[
        "ticker",
        "date",
        "b_p",
        "c_p",
        "b_n",
        "c_n",
        "sharpe",
        "acceptability_long",
        "acceptability_short",
    ]);
    for record in &records {
        let moments = record.moments()?;
        let params = params_from_moments(&moments).map_err(numeric)?;
        let sharpe = sharpe_ratio(&moments, days).map_err(numeric)?;
        let row_seed = master.next_u64();
        let draws = sample(&params, horizon, paths, row_seed).map_err(numeric)?;
        let long = acceptability_index(&draws, Position::Long).map_err(numeric)?;
        let short = acceptability_index(&draws, Position::Short).map_err(numeric)?;
        table.row(vec![
            record.ticker.clone(),
            record.date.to_string(),
            fmt_float(params.b_p),
            fmt_float(params.c_p),
            fmt_float(params.b_n),
            fmt_float(params.c_n),
            fmt_float(sharpe),
            fmt_float(long),
            fmt_float(short),
        ]);
    }
    table.emit(out)
}
