use std::path::Path;

use chshent::measures::measure_all;

use super::{read_state, Status};
use crate::args::MeasureArgs;
use crate::error::CliResult;
use crate::output::write_json;

pub fn run(args: &MeasureArgs, out: Option<&Path>) -> CliResult<Status> {
    let rho = read_state(&args.state)?;
    let report = measure_all(&rho, args.ree_tol)?;
    write_json(out, &report)?;
    Ok(Status::Pass)
}
