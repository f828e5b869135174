//! `betamix` command-line front end.
//!
//! Exit codes: 0 success or certified, 1 violated or a failing lemma case,
//! 2 malformed input or usage, 3 evaluation failure, 4 identically-zero mixture.

mod args;
mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::Parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Violated = 1,
    Usage = 2,
    Evaluation = 3,
    Degenerate = 4,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Eval(String),
    Degenerate,
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) | CliError::Input(_) => Exit::Usage,
            CliError::Eval(_) => Exit::Evaluation,
            CliError::Degenerate => Exit::Degenerate,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) => f.write_str(m),
            CliError::Eval(m) => write!(f, "evaluation failed: {m}"),
            CliError::Degenerate => f.write_str("mixture is identically zero"),
        }
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let exit = match commands::run(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("betamix: {err}");
            err.exit()
        }
    };
    ExitCode::from(exit as u8)
}
