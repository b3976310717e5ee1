//! Random-state scatter with an envelope check on every row.
//!
//! Sample `k` is always drawn from the substream `(seed, k)`, so the output
//! is identical for any worker count.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use rayon::prelude::*;

use chshent::extremal::{
    c_max, c_of_n_upper_b0, lower_bounds, n2, n4, n_max, onto_zero_violation, plateau_alpha_range,
    plateau_params, region_landmarks,
};
use chshent::families::{
    amplitude_damped, bell_diagonal, random_state_at, AmplitudeDampedParams, BellDiagonalParams,
};
use chshent::measures::{b_from_m, concurrence, horodecki_m, negativity, ree};
use chshent::qcore::DensityMatrix;

use super::Status;
use crate::args::{Coordinate, ScatterArgs};
use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, fmt_num};

/// `|B|` below this counts as no violation.
const B_ZERO_TOL: f64 = 1e-9;
const ENVELOPE_TOL: f64 = 1e-9;

struct Row {
    source: &'static str,
    index: u64,
    m: f64,
    b: f64,
    n: f64,
    c: f64,
    e_r: Option<f64>,
}

impl Row {
    fn new(source: &'static str, index: u64, rho: &DensityMatrix) -> Self {
        let m = horodecki_m(rho);
        Row {
            source,
            index,
            m,
            b: b_from_m(m),
            n: negativity(rho),
            c: concurrence(rho),
            e_r: None,
        }
    }

    fn value(&self, c: Coordinate) -> Option<f64> {
        match c {
            Coordinate::B => Some(self.b),
            Coordinate::M => Some(self.m),
            Coordinate::N => Some(self.n),
            Coordinate::C => Some(self.c),
            Coordinate::Er => self.e_r,
        }
    }

    fn inside_envelope(&self, b_zero: bool) -> bool {
        let (b, n, c, tol) = (self.b, self.n, self.c, ENVELOPE_TOL);
        let mut ok = b <= n + tol
            && b <= c + tol
            && n <= n_max(b).unwrap_or(f64::NAN) + tol
            && c <= c_max(b).unwrap_or(f64::NAN) + tol;
        if let Some(e_r) = self.e_r {
            ok &= lower_bounds(b).is_ok_and(|lb| e_r >= lb.e_r_min - tol);
        }
        if b_zero {
            ok &= n <= n2() + tol
                && c >= n - tol
                && c_of_n_upper_b0(n.min(n2())).is_ok_and(|upper| c <= upper + tol);
        }
        ok
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Families on the boundary of the `B = 0` region, which rejection sampling
/// rarely reaches.
fn boundary_states(count: usize) -> chshent::Result<Vec<(&'static str, DensityMatrix)>> {
    let mut out = Vec::new();
    for mark in region_landmarks()? {
        out.push(("landmark", mark.state));
    }
    for p in linspace(0.0, FRAC_1_SQRT_2, count) {
        let rho = onto_zero_violation(p, |p| {
            Ok(amplitude_damped(AmplitudeDampedParams::new(0.5, p)?))
        })?;
        out.push(("horodecki", rho));
    }
    let (lo, hi) = plateau_alpha_range();
    for alpha in linspace(lo, hi, count) {
        let params = plateau_params(alpha)?;
        let rho = onto_zero_violation(params.p, |p| {
            Ok(amplitude_damped(AmplitudeDampedParams::new(alpha, p)?))
        })?;
        out.push(("plateau", rho));
    }
    for n in linspace(0.0, n4(), count) {
        let rho = onto_zero_violation(n, |n| {
            let small = (1.0 - n) / 6.0;
            Ok(bell_diagonal(BellDiagonalParams::new([
                small,
                small,
                small,
                1.0 - 3.0 * small,
            ])?))
        })?;
        out.push(("bell_diagonal", rho));
    }
    Ok(out)
}

pub fn run(args: &ScatterArgs, out: Option<&Path>) -> CliResult<Status> {
    if !(1..=4).contains(&args.rank) {
        return Err(CliError::Usage(format!("rank {} outside 1..=4", args.rank)));
    }
    if args.count == 0 {
        return Err(CliError::Usage("count must be at least 1".into()));
    }
    let wants_ree = args.measures.contains(&Coordinate::Er);
    if wants_ree && !args.with_ree {
        return Err(CliError::Usage("the E_R column needs --with-ree".into()));
    }

    let mut rows: Vec<(Row, DensityMatrix)> = (0..args.count)
        .into_par_iter()
        .filter_map(|k| {
            let rho = random_state_at(args.rank, args.seed, k);
            let row = Row::new("random", k, &rho);
            (!args.b_zero || row.b < B_ZERO_TOL).then_some((row, rho))
        })
        .collect();
    if args.b_zero {
        for (k, (source, rho)) in boundary_states(args.boundary_points)?
            .into_iter()
            .enumerate()
        {
            let row = Row::new(source, k as u64, &rho);
            if row.b < B_ZERO_TOL {
                rows.push((row, rho));
            }
        }
    }
    if wants_ree {
        let cap = args.ree_cap.min(rows.len());
        rows[..cap]
            .par_iter_mut()
            .try_for_each(|(row, rho)| -> chshent::Result<()> {
                row.e_r = Some(ree(rho, args.ree_tol)?.e_r);
                Ok(())
            })?;
    }

    let mut w = csv_writer(out)?;
    let mut header = vec!["index", "source"];
    header.extend(args.measures.iter().map(|c| c.header()));
    w.write_record(&header)?;
    let mut violations = 0usize;
    for (row, _) in &rows {
        if !row.inside_envelope(args.b_zero) {
            violations += 1;
        }
        let mut record = vec![row.index.to_string(), row.source.to_string()];
        record.extend(
            args.measures
                .iter()
                .map(|&c| row.value(c).map(fmt_num).unwrap_or_default()),
        );
        w.write_record(&record)?;
    }
    w.flush()?;
    eprintln!(
        "draws {}, rows {}, envelope violations {violations}",
        args.count,
        rows.len()
    );
    Ok(Status::from_pass(violations == 0))
}
