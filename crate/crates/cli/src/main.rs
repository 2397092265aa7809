//! `pooling`: exact analyses, property sweeps and Monte Carlo checks for
//! risk pooling on the Boolean lattice.

mod commands;
mod config;
mod model;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pooling_core::scalar::Rational;
use pooling_core::NumericMode;
use serde::Serialize;

use crate::commands::Output;
use crate::config::{load_config, Body, Config, GameBody};

#[derive(Parser)]
#[command(name = "pooling", version, about = "Risk pooling on the Boolean lattice")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the mode in the configuration.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: u64,
    /// Write report.json (and CSV tables with --csv) here instead of printing JSON.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest ground set accepted from a config, and swept by `verify` (default 6 there).
    #[arg(long, global = true)]
    max_ground: Option<usize>,
    #[arg(long, global = true, requires = "out")]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the coupled expectation of two set functions over every subset.
    Convolve,
    /// Production, military or merger scenario tables and optimal pooling sets.
    Scenario,
    /// Multi-supplier shipment game.
    #[command(subcommand)]
    Game(GameCommand),
    /// Randomized property sweeps.
    Verify {
        /// Cases per sweep.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Payoffs of every profile, dominance certificates and equilibria.
    Analyze,
    /// Monte Carlo payoff estimates for the configured profile.
    Simulate,
}

/// Failures that are the caller's fault exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Violation,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(global: &Global) -> Result<(Config, NumericMode)> {
    let path = global
        .config
        .as_deref()
        .ok_or_else(|| anyhow!("this command needs --config PATH"))?;
    let config = load_config(path)?;
    let mode = match global.mode {
        Some(Mode::Exact) => NumericMode::Exact,
        Some(Mode::Float) => NumericMode::Float,
        None => config.mode.unwrap_or_default(),
    };
    Ok((config, mode))
}

fn finish<R: Serialize>(output: Output<R>, global: &Global) -> Result<(), Failure> {
    report::emit(&output.report, &output.tables, global.out.as_deref(), global.csv)?;
    if output.passed {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn game_body<'a>(config: &'a Config, path: Option<&Path>) -> Result<&'a GameBody> {
    match &config.body {
        Body::Game(b) => Ok(b),
        other => Err(anyhow!(
            "`game` needs a game config, {} has kind `{}`",
            path.map_or_else(String::new, |p| p.display().to_string()),
            other.kind()
        )),
    }
}

macro_rules! by_mode {
    ($mode:expr, $f:ident ( $($arg:expr),* )) => {
        match $mode {
            NumericMode::Exact => commands::$f::<Rational>($($arg),*),
            NumericMode::Float => commands::$f::<f64>($($arg),*),
        }
    };
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Convolve => {
            let (config, mode) = load(g)?;
            let Body::Convolution(body) = &config.body else {
                return Err(anyhow!("`convolve` needs a convolution config, not `{}`", config.body.kind()).into());
            };
            finish(by_mode!(mode, convolution(body, g.max_ground))?, g)
        }
        Command::Scenario => {
            let (config, mode) = load(g)?;
            finish(by_mode!(mode, scenario(&config.body, g.max_ground))?, g)
        }
        Command::Game(sub) => {
            let (config, mode) = load(g)?;
            let body = game_body(&config, g.config.as_deref())?;
            match sub {
                GameCommand::Analyze => finish(by_mode!(mode, analyze(body, g.max_ground))?, g),
                GameCommand::Simulate => {
                    finish(by_mode!(mode, simulate(body, g.max_ground, g.samples, g.seed))?, g)
                }
            }
        }
        Command::Verify { cases } => {
            let settings = verify::Settings {
                seed: g.seed,
                max_ground: g.max_ground.unwrap_or(6),
                cases: *cases,
                samples: g.samples,
            };
            if settings.max_ground == 0 || settings.max_ground > verify::MAX_GROUND {
                return Err(anyhow!("--max-ground must lie in 1..={}", verify::MAX_GROUND).into());
            }
            let report = verify::run(&settings).context("verify")?;
            let passed = report.passed;
            finish(
                Output {
                    report,
                    tables: vec![],
                    passed,
                },
                g,
            )
        }
    }
}
