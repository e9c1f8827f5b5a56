//! Command-line interface of the `edgemarket` binary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgemarket_core::ParamKey;
use serde::Serialize;

use crate::config::{Config, ConfigError};
use crate::exit;
use crate::sweep::{self, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "edgemarket",
    version,
    about = "Equilibrium solver for a sponsored-content and edge-caching market"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the three-stage game and print the equilibrium.
    Solve(Common),
    /// Solve a family of markets over one swept parameter.
    Sweep(SweepArgs),
    /// Solve, then evaluate the existence and uniqueness conditions.
    Check(Common),
    /// Compare the solvers against brute-force grid searches.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Market override `key=value`; may repeat.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub param: ParamKey,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Price grid resolution of the oracle.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver failed: {0}")]
    Solve(#[from] edgemarket_core::Error),
    #[error("output failed: {0}")]
    Io(#[from] io::Error),
    #[error("output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("output failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => exit::SUCCESS,
            _ => exit::FAILURE,
        }
    }
}

fn load(path: &Path, overrides: &[String]) -> Result<Config, ConfigError> {
    let mut config = Config::load(path)?;
    for o in overrides {
        config.apply_override(o)?;
    }
    Ok(config)
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(
    value: &T,
    format: Format,
    out: &Option<PathBuf>,
    csv: impl FnOnce(&mut dyn Write) -> csv::Result<()>,
) -> Result<(), CliError> {
    let mut w = sink(out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        Format::Csv => csv(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => {
            let config = load(&args.config, &args.overrides)?;
            let report = crate::run_solve(&config)?;
            emit(&report, args.format, &args.out, |w| report.write_csv(w))?;
            Ok(report.exit_status())
        }
        Command::Check(args) => {
            let config = load(&args.config, &args.overrides)?;
            let report = crate::run_check(&config)?;
            emit(&report, args.format, &args.out, |w| report.write_csv(w))?;
            Ok(report.exit_status())
        }
        Command::Oracle(args) => {
            let common = &args.common;
            let config = load(&common.config, &common.overrides)?;
            let report = crate::run_oracle(&config, args.grid)?;
            emit(&report, common.format, &common.out, |w| report.write_csv(w))?;
            Ok(report.exit_status())
        }
        Command::Sweep(args) => {
            let config = Config::load(&args.config)?;
            let mut spec = SweepSpec::new(args.param, args.from, args.to, args.steps);
            for o in &args.overrides {
                let mut probe = config.clone();
                probe.apply_override(o)?;
                let (key, _) = o.split_once('=').expect("validated override");
                let key: ParamKey = key.trim().parse().expect("validated override");
                spec = spec.with_override(key, probe.market.get(key));
            }
            let rows = sweep::run_sweep(&config, &spec)?;
            emit(&rows, args.format, &args.out, |w| {
                sweep::write_csv(&rows, w)
            })?;
            Ok(if rows.iter().any(|r| !r.converged) {
                exit::NO_CONVERGENCE
            } else if rows.iter().any(|r| r.any_condition_violated()) {
                exit::CONDITIONS_VIOLATED
            } else {
                exit::SUCCESS
            })
        }
    }
}
