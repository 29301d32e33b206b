//! `lsc`: command-line driver for the lattice Schrödinger experiments.
//!
//! Each subcommand writes a CSV table (stdout unless `--out` is given), a
//! short report on stderr and, with `--json`, a summary object.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 the potential fails
//! the standing assumptions, 4 a solver did not converge, 5 an experiment
//! check failed.

mod commands;
mod config;
mod error;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{CommonArgs, RunConfig};
use crate::error::{CliError, EXIT_CONFIG, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "lsc", version, about = "Spectra of discrete Schrödinger operators in the coupled continuum/semiclassical limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Lowest eigenvalues of one assembled operator.
    Spectrum,
    /// Limit spectrum: sorted harmonic-well energies.
    Sigma,
    /// E_n(H_N)/λ_N against the limit spectrum along a list of N.
    Converge,
    /// E_n(κ)/κ² against 2n+1 along a list of κ.
    Kappa,
    /// Growth exponent of E_n(H_N) across a grid of γ.
    Regimes,
    /// Residual, Gram and Ritz diagnostics of the Hermite quasimodes.
    Quasimode,
    /// Nodal interval decomposition and lower-bound certificates.
    Intervals,
    /// IMS localization around the wells.
    Ims,
    /// Check the standing assumptions on the potential.
    Validate,
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum => commands::spectrum(cfg),
        Command::Sigma => commands::sigma(cfg),
        Command::Converge => commands::converge(cfg),
        Command::Kappa => commands::kappa(cfg),
        Command::Regimes => commands::regimes(cfg),
        Command::Quasimode => commands::quasimode(cfg),
        Command::Intervals => commands::intervals(cfg),
        Command::Ims => commands::ims(cfg),
        Command::Validate => commands::validate(cfg),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let outcome = dispatch(cli.command, &cfg)?;
    outcome.table.emit(cfg.out.as_deref())?;
    for line in &outcome.report {
        eprintln!("{line}");
    }
    if let Some(path) = &cfg.json {
        let params = serde_json::to_value(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
        let summary = output::summary(
            outcome.experiment,
            params,
            outcome.pass,
            outcome.constants.clone(),
            cfg.out.as_deref(),
        );
        let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Config(e.to_string()))?;
        fs::write(path, text + "\n")?;
    }
    eprintln!(
        "{}: {} rows, {}",
        outcome.experiment,
        outcome.table.len(),
        if outcome.pass { "pass" } else { "FAIL" }
    );
    Ok(if outcome.pass { EXIT_OK } else { outcome.failure_code })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
