use std::path::Path;

use serde::Serialize;

use chshent::extremal::{
    kkt_check, mixture_rho_q, n4, ordering_control_pair, ordering_counterexamples,
    region_landmarks, vw_check, KktReport, Landmark, OrderingPair, VwReport,
};
use chshent::families::{rho_max_params, AmplitudeDampedParams};
use chshent::measures::{chsh_violation_b, concurrence, negativity};

use super::Status;
use crate::args::{CheckCommand, KktArgs};
use crate::error::CliResult;
use crate::output::write_json;

/// Residual allowed in the Verstraete-Wolf identities.
const VW_TOL: f64 = 1e-12;
/// Landmark `(N, C)` must match the closed forms this closely, with `B` this
/// close to zero.
const LANDMARK_TOL: f64 = 1e-6;
const LANDMARK_B_TOL: f64 = 1e-9;

pub fn run(which: &CheckCommand, out: Option<&Path>) -> CliResult<Status> {
    match which {
        CheckCommand::Kkt(args) => kkt(args, out),
        CheckCommand::Vw { grid } => vw(&grid.values(), out),
        CheckCommand::Landmarks { q } => landmarks(*q, out),
        CheckCommand::Ordering => ordering(out),
    }
}

#[derive(Serialize)]
struct KktOutput {
    alpha: f64,
    p: f64,
    #[serde(flatten)]
    report: KktReport,
}

fn kkt(args: &KktArgs, out: Option<&Path>) -> CliResult<Status> {
    let params = match (args.alpha, args.p) {
        (Some(alpha), Some(p)) => AmplitudeDampedParams::new(alpha, p)?,
        _ => rho_max_params(args.b, args.b0)?,
    };
    let report = kkt_check(params, args.tol)?;
    let status = Status::from_pass(report.pass);
    write_json(
        out,
        &KktOutput {
            alpha: params.alpha,
            p: params.p,
            report,
        },
    )?;
    Ok(status)
}

#[derive(Serialize)]
struct VwPoint {
    #[serde(rename = "B")]
    b: f64,
    #[serde(flatten)]
    report: VwReport,
    /// `lhs3 − rhs3` of the third condition as written; `−2ξ²`.
    condition3_residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VwOutput {
    points: Vec<VwPoint>,
    pass: bool,
}

fn vw(grid: &[f64], out: Option<&Path>) -> CliResult<Status> {
    let points = grid
        .iter()
        .map(|&b| {
            let r = vw_check(b)?;
            let pass = r.cond1
                && r.saturation2.abs() <= VW_TOL
                && r.saturation3.abs() <= VW_TOL
                && (r.a_plus - 1.0).abs() <= VW_TOL;
            Ok(VwPoint {
                b,
                condition3_residual: r.lhs3 - r.rhs3,
                report: r,
                pass,
            })
        })
        .collect::<chshent::Result<Vec<_>>>()?;
    let pass = points.iter().all(|p| p.pass);
    write_json(out, &VwOutput { points, pass })?;
    Ok(Status::from_pass(pass))
}

#[derive(Serialize)]
struct LandmarkRow {
    #[serde(flatten)]
    landmark: Landmark,
    deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MixtureRow {
    q: f64,
    #[serde(rename = "N")]
    n: f64,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "B")]
    b: f64,
    /// `N₄`, the negativity the mixture is tuned to.
    n_target: f64,
}

#[derive(Serialize)]
struct LandmarkOutput {
    landmarks: Vec<LandmarkRow>,
    rho_q: MixtureRow,
    pass: bool,
}

fn landmarks(q: f64, out: Option<&Path>) -> CliResult<Status> {
    let rows: Vec<LandmarkRow> = region_landmarks()?
        .into_iter()
        .map(|landmark| {
            let deviation = landmark.deviation();
            let pass = deviation <= LANDMARK_TOL && landmark.b <= LANDMARK_B_TOL;
            LandmarkRow {
                landmark,
                deviation,
                pass,
            }
        })
        .collect();
    let mixture = mixture_rho_q(q)?;
    let rho_q = MixtureRow {
        q,
        n: negativity(&mixture),
        c: concurrence(&mixture),
        b: chsh_violation_b(&mixture),
        n_target: n4(),
    };
    let pass = rows.iter().all(|r| r.pass);
    write_json(
        out,
        &LandmarkOutput {
            landmarks: rows,
            rho_q,
            pass,
        },
    )?;
    Ok(Status::from_pass(pass))
}

#[derive(Serialize)]
struct OrderingOutput {
    counterexamples: Vec<OrderingPair>,
    control: OrderingPair,
    pass: bool,
}

fn ordering(out: Option<&Path>) -> CliResult<Status> {
    let counterexamples = ordering_counterexamples()?;
    let control = ordering_control_pair()?;
    let pass = counterexamples.iter().all(|p| p.holds) && control.holds;
    write_json(
        out,
        &OrderingOutput {
            counterexamples,
            control,
            pass,
        },
    )?;
    Ok(Status::from_pass(pass))
}
