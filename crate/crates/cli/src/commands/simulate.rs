use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use chshent::twocopy::{
    b_from_ttt, estimate_ttt, sample_schedule, BEstimate, RegimeWeights, TttEstimate,
};

use super::{read_state, Status};
use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::output::write_json;

#[derive(Serialize)]
struct SimulateOutput {
    #[serde(flatten)]
    estimate: TttEstimate,
    #[serde(flatten)]
    b: BEstimate,
    weights: RegimeWeights,
    seed: u64,
}

pub fn run(args: &SimulateArgs, out: Option<&Path>) -> CliResult<Status> {
    let rho = read_state(&args.state)?;
    let streams = sample_schedule(&rho, args.shots, args.weights, args.seed)?;
    if let Some(dir) = &args.dump_shots {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for stream in &streams {
            let path = dir.join(format!("shots_{}.csv", stream.setting));
            let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
            let mut w = BufWriter::new(file);
            stream
                .write_csv(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| CliError::io(&path, e))?;
        }
    }
    let estimate = estimate_ttt(&streams, args.estimator.into())?;
    let b = b_from_ttt(&estimate)?;
    write_json(
        out,
        &SimulateOutput {
            estimate,
            b,
            weights: args.weights,
            seed: args.seed,
        },
    )?;
    Ok(Status::Pass)
}
