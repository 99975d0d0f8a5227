//! Command-line front end for the `ferrojet` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod svg;

use args::{Cli, Command};
use error::CliError;

/// Runs one command and maps the outcome to the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result: Result<bool, CliError> = match &cli.command {
        Command::Curves(a) => commands::curves(a).map(|_| true),
        Command::Classify(a) => commands::classify_point(a).map(|_| true),
        Command::Coeffs(a) => commands::coeffs(a).map(|_| true),
        Command::Solve(a) => commands::solve(a).map(|_| true),
        Command::Verify(a) => commands::verify(a),
        Command::LangevinThreshold(a) => commands::langevin_threshold(a).map(|_| true),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("ferrojet: some checks failed");
            2
        }
        Err(e) if e.is_broken_pipe() => 0,
        Err(e) => {
            eprintln!("ferrojet: {e}");
            e.exit_code()
        }
    }
}
