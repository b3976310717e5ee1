use std::io::Write;
use std::path::Path;

use chshent::error::Error;
use chshent::extremal::{plateau_state, region_landmarks};
use chshent::families::{
    amplitude_damped, bell_diagonal, horodecki_state, random_state_at, rho_max, rho_min, singlet,
    werner, AmplitudeDampedParams, BellDiagonalParams, REE_CROSSOVER_B0,
};
use chshent::qcore::{serialize_state, DensityMatrix};

use super::Status;
use crate::args::Family;
use crate::error::{CliError, CliResult};
use crate::output::open;

fn build(family: &Family) -> CliResult<DensityMatrix> {
    Ok(match *family {
        Family::Singlet => singlet(),
        Family::Werner { p } => werner(p)?,
        Family::Horodecki { p } => horodecki_state(p)?,
        Family::AmplitudeDamped { alpha, p } => {
            amplitude_damped(AmplitudeDampedParams::new(alpha, p)?)
        }
        Family::BellDiagonal { l1, l2, l3, l4 } => {
            bell_diagonal(BellDiagonalParams::new([l1, l2, l3, l4])?)
        }
        Family::RhoMin { b } => rho_min(b)?,
        Family::RhoMax { b, b0 } => rho_max(b, b0)?,
        Family::RhoMaxRee { b } => rho_max(b, REE_CROSSOVER_B0)?,
        Family::Plateau { alpha } => plateau_state(alpha)?,
        Family::Landmark { ref label } => {
            region_landmarks()?
                .into_iter()
                .find(|m| m.label.eq_ignore_ascii_case(label))
                .ok_or_else(|| CliError::Usage(format!("no landmark {label:?}; use X1 ... X5")))?
                .state
        }
        Family::Random { rank, seed, index } => {
            if !(1..=4).contains(&rank) {
                return Err(Error::Domain(format!("rank {rank} outside 1..=4")).into());
            }
            random_state_at(rank, seed, index)
        }
    })
}

pub fn run(family: &Family, out: Option<&Path>) -> CliResult<Status> {
    let rho = build(family)?;
    let mut sink = open(out)?;
    writeln!(sink, "{}", serialize_state(&rho))?;
    sink.flush()?;
    Ok(Status::Pass)
}
