use std::path::Path;

use rayon::prelude::*;

use chshent::extremal::BoundCurves;
use chshent::families::{rho_max, REE_CROSSOVER_B0};
use chshent::measures::ree;

use super::Status;
use crate::args::BoundsArgs;
use crate::error::CliResult;
use crate::output::{csv_writer, fmt_num};

const HEADER: [&str; 7] = ["B", "N_max", "C_max", "N_min", "C_min", "ERmin", "ERmax"];

pub fn run(args: &BoundsArgs, out: Option<&Path>) -> CliResult<Status> {
    let grid = args.grid.values();
    let curves = BoundCurves::on_grid(&grid)?;
    // numeric E_R on the REE-maximizing family
    let e_r_max = grid
        .par_iter()
        .map(|&b| Ok(ree(&rho_max(b, REE_CROSSOVER_B0)?, args.ree_tol)?.e_r))
        .collect::<chshent::Result<Vec<f64>>>()?;
    let mut w = csv_writer(out)?;
    w.write_record(HEADER)?;
    for (p, er) in curves.points.iter().zip(e_r_max) {
        w.write_record([p.b, p.n_max, p.c_max, p.n_min, p.c_min, p.e_r_min, er].map(fmt_num))?;
    }
    w.flush()?;
    Ok(Status::Pass)
}
