//! `fbas-reward`: quorum analysis, reward shares and experiments from the
//! command line.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 precondition refused
//! (no quorum intersection), 4 resource cap exceeded.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Refused(String),
    Cap(String),
    Other(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Refused(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "cannot parse input: {m}"),
            CliError::Refused(m) | CliError::Cap(m) => f.write_str(m),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.quiet {
            log::LevelFilter::Warn
        } else {
            log::LevelFilter::Info
        })
        .parse_default_env()
        .format_timestamp(None)
        .format_target(false)
        .init();

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("fbas-reward: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
