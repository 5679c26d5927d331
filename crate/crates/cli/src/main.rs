mod args;
mod commands;
mod format;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::de::DeserializeOwned;

use args::{Cli, Command, Merge};

/// Bad flags, files or parameter values; exit status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<bousq::Error> for UsageError {
    fn from(e: bousq::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// Exit statuses besides 0 and 1.
pub enum Outcome {
    Ok,
    DerivedFailure,
    Blowup,
}

fn with_config<T: Merge + DeserializeOwned + Default>(
    cli: T,
    path: Option<&Path>,
) -> Result<T, UsageError> {
    let Some(path) = path else {
        return Ok(cli);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
    let file: T = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
    Ok(cli.merge(file))
}

fn dispatch(cli: Cli) -> Result<Outcome, UsageError> {
    let cfg = cli.config.as_deref();
    match cli.command {
        Command::Eval(a) => commands::eval(with_config(a, cfg)?),
        Command::Verify(a) => commands::verify(with_config(a, cfg)?),
        Command::Simulate(a) => commands::simulate(with_config(a, cfg)?),
        Command::Elliptic(a) => commands::elliptic(with_config(a, cfg)?),
        Command::Catalog(a) => commands::catalog(with_config(a, cfg)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::DerivedFailure) => ExitCode::from(2),
        Ok(Outcome::Blowup) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
