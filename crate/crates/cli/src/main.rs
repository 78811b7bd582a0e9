//! chsh-forge: configure a run, execute the pipeline (generate → test
//! assumptions → replay proof → verify chain), and emit machine-readable
//! reports and tables.
//!
//! Exit codes: 0 means the pipeline completed (a detected assumption
//! violation is a finding, not a failure), 1 is a usage error, 2 a model
//! contract breach
//! (setting leakage or a dichotomy breach).

mod args;
mod pipeline;
mod report;
mod zoo;

use args::{Cli, Command};
use chsh_core::error::{ModelError, RunError, StatError};
use clap::Parser;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed input files, degenerate parameters. Exit 1.
    Usage(String),
    /// The model broke its declared contract mid-run. Exit 2.
    Contract(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Contract(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Contract(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::SettingLeakage { .. } | RunError::ContractBreach { .. } => {
                CliError::Contract(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<StatError> for CliError {
    fn from(e: StatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<chsh_core::error::CsvError> for CliError {
    fn from(e: chsh_core::error::CsvError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(0);
                }
                _ => {
                    let _ = e.print();
                    std::process::exit(1);
                }
            }
        }
    };

    let result = match cli.command {
        Command::Run(a) => pipeline::cmd_run(a),
        Command::Prove(a) => pipeline::cmd_prove(a),
        Command::Sweep(a) => pipeline::cmd_sweep(a),
    };

    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
