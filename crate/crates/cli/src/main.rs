mod args;
mod commands;
mod render;

use std::io;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bsconc::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0} golden check(s) failed")]
    Golden(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Golden(_) => 3,
            _ => 2,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { state, output } => commands::analyze(&state, &output),
        Command::Transform { state, eta, output } => commands::transform(&state, eta, &output),
        Command::Sweep {
            state,
            n_points,
            output,
        } => commands::sweep(&state, n_points, &output),
        Command::Optimize {
            state,
            mode,
            output,
        } => commands::optimize(&state, mode, &output),
        Command::Reproduce { output } => commands::reproduce(&output),
        Command::WernerDemo {
            pure,
            fractions,
            n_points,
            output,
        } => commands::werner_demo(pure, fractions, n_points, &output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
