mod bounds;
mod check;
mod measure;
mod scatter;
mod simulate;
mod state;

use std::fs;
use std::path::Path;

use chshent::qcore::{parse_state, DensityMatrix};

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::CheckFailed
        }
    }
}

pub fn run(cli: Cli) -> CliResult<Status> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    let out = cli.out.as_deref();
    pool.install(|| match &cli.command {
        Command::Measure(a) => measure::run(a, out),
        Command::Bounds(a) => bounds::run(a, out),
        Command::Scatter(a) => scatter::run(a, out),
        Command::Check { which } => check::run(which, out),
        Command::Simulate(a) => simulate::run(a, out),
        Command::State { family } => state::run(family, out),
    })
}

pub fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_state(&text)?)
}
