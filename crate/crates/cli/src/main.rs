//! `chshent`: CHSH violation, entanglement measures, extremal-state checks
//! and the two-copy simulation from the command line.
//!
//! Exit codes: 0 on success, 1 when a check or envelope test fails, 2 on
//! usage, parse or validation errors.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use commands::Status;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
