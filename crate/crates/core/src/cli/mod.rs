//! Command-line front end: `fourphoton <command> --config run.json`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 configuration or input
//! error, 3 a quadrature did not converge.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::terms::{RateKind, SetupKind};
use commands::Outcome;
use config::{ConfigError, Format, RunConfig};
use output::Outputs;

#[derive(Debug, Parser)]
#[command(
    name = "fourphoton",
    version,
    about = "Four-photon visibility loss in pulsed down-conversion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `outputs.directory`. Without either,
    /// results are only printed.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated output formats; overrides `outputs.formats`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Reserved. Nothing here draws random numbers, so there is no seed to
    /// drop; setting the flag is an error.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The five spectral overlap integrals and the coherence ratio.
    Integrals,
    /// Calibration histogram: central peak, side peak and their ratio.
    Calibrate,
    /// Franson rates, visibility and the fringe over `alpha + beta`.
    Franson,
    /// Visibility against `2 rho` over the configured sweep.
    Sweep,
    /// Stationary terms of one rate integral.
    Terms {
        #[arg(long)]
        kind: RateKind,
        #[arg(long)]
        setup: SetupKind,
        /// Detection bins `T_A,T_B` in units of tau.
        #[arg(long, value_delimiter = ',', default_values_t = [1, 1])]
        times: Vec<i32>,
    },
    /// Oracle against closed forms.
    Verify,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(Error::NonConvergence { .. }) => 3,
            _ => 2,
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config <path> is required for this command".into()))?;
    Ok(RunConfig::load(path)?)
}

fn outputs(cli: &Cli, cfg: Option<&RunConfig>) -> Result<Outputs, CliError> {
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.outputs.directory.clone()));
    let formats = cli
        .format
        .clone()
        .or_else(|| cfg.map(|c| c.outputs.formats.clone()))
        .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
    if let Some(d) = &dir {
        output::check_writable(d)
            .map_err(|e| CliError::Usage(format!("output directory {}: {e}", d.display())))?;
    }
    Ok(Outputs::new(dir, &formats))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.seedless {
        return Err(CliError::Usage(
            "--seedless is reserved and rejected: every computation is deterministic and uses no random numbers".into(),
        ));
    }
    if let Command::Terms { kind, setup, times } = &cli.command {
        let &[t_a, t_b] = times.as_slice() else {
            return Err(CliError::Usage(
                "--times takes exactly two bins, e.g. 1,0".into(),
            ));
        };
        let cfg = cli.config.as_ref().map(|_| load(cli)).transpose()?;
        let mut out = outputs(cli, cfg.as_ref())?;
        return commands::terms(*kind, *setup, t_a, t_b, &mut out);
    }
    let cfg = load(cli)?;
    let mut out = outputs(cli, Some(&cfg))?;
    let outcome = match cli.command {
        Command::Integrals => commands::integrals(&cfg, &mut out),
        Command::Calibrate => commands::calibrate(&cfg, &mut out),
        Command::Franson => commands::franson(&cfg, &mut out),
        Command::Sweep => commands::sweep(&cfg, &mut out),
        Command::Verify => commands::verify(&cfg, &mut out),
        Command::Terms { .. } => unreachable!(),
    }?;
    for p in out.written() {
        eprintln!("wrote {}", p.display());
    }
    Ok(outcome)
}

/// Parse the process arguments, run, and map the result to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
