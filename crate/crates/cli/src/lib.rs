//! Command-line front end for `hslra`: simulation, approximation,
//! forecasting, rank profiles and the experiment harness.

// `!(x > 0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
mod error;
pub mod io;
pub mod stats;

pub use error::{CliError, CliResult};

use commands::{approximate, experiment, forecast, rankprofile, simulate};
use config::{ConfigFile, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "hslra", version, about = "Hankel structured low-rank approximation and forecasting")]
pub struct Cli {
    /// TOML or JSON file with settings; flags and HSLRA_* variables win.
    #[arg(long, global = true, env = "HSLRA_CONFIG")]
    pub config: Option<PathBuf>,

    /// Base seed for every random draw.
    #[arg(long, global = true, env = "HSLRA_SEED")]
    pub seed: Option<u64>,

    /// Output directory (created if missing).
    #[arg(long, global = true, env = "HSLRA_OUT", default_value = "out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Damped sinusoid plus noise, written as CSV.
    Simulate(simulate::SimulateArgs),
    /// Structured low-rank approximation of a series.
    Approximate(approximate::ApproximateArgs),
    /// Hankel completion forecast, optionally over a parameter grid.
    Forecast(forecast::ForecastArgs),
    /// Reproduce the numerical examples.
    Experiment(experiment::ExperimentArgs),
    /// Numerical rank of every Hankel embedding of a series.
    Rankprofile(rankprofile::RankProfileArgs),
}

/// Shared run context.
#[derive(Debug, Clone)]
pub struct Context {
    pub seed: u64,
    pub out: io::OutDir,
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    // resolve everything before touching the file system
    let resolved = match &cli.command {
        Command::Simulate(a) => Resolved::Simulate(a.apply(file.simulate.unwrap_or_default())),
        Command::Approximate(a) => Resolved::Approximate(a.apply(file.approximate.unwrap_or_default())),
        Command::Forecast(a) => Resolved::Forecast(a.apply(file.forecast.unwrap_or_default())),
        Command::Experiment(a) => Resolved::Experiment(a.apply(file.experiment.unwrap_or_default())),
        Command::Rankprofile(a) => Resolved::RankProfile(a.apply(file.rankprofile.unwrap_or_default())),
    };
    resolved.validate()?;
    let ctx = Context {
        seed,
        out: io::OutDir::new(&cli.out)?,
    };
    match resolved {
        Resolved::Simulate(s) => simulate::run(&ctx, s),
        Resolved::Approximate(s) => approximate::run(&ctx, s),
        Resolved::Forecast(s) => forecast::run(&ctx, s),
        Resolved::Experiment(s) => experiment::run(&ctx, s),
        Resolved::RankProfile(s) => rankprofile::run(&ctx, s),
    }
}

enum Resolved {
    Simulate(simulate::SimulateSettings),
    Approximate(approximate::ApproximateSettings),
    Forecast(forecast::ForecastSettings),
    Experiment(experiment::ExperimentSettings),
    RankProfile(rankprofile::RankProfileSettings),
}

impl Resolved {
    fn validate(&self) -> CliResult<()> {
        match self {
            Self::Simulate(s) => s.validate(),
            Self::Approximate(s) => s.validate(),
            Self::Forecast(s) => s.validate(),
            Self::Experiment(s) => s.validate(),
            Self::RankProfile(s) => s.validate(),
        }
    }
}
