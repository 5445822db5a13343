mod cache;
mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mzv_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// What a finished command reports besides its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check failed or the results are partial.
    Failed,
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    if cfg.is_large() {
        eprintln!(
            "warning: max_weight {} is beyond desk scale; weight 12 takes over a minute and more than 1 GB of memory",
            cfg.max_weight
        );
    }
    let (body, status) = commands::execute(&cfg)?;
    output::emit(&body, cfg.out.as_deref())?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
