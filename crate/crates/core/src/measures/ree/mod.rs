//! Relative entropy of entanglement by projected gradient over PPT states.
//!
//! For two qubits the separable states are exactly the PPT states, so
//! `E_R(ρ) = min S(ρ‖σ)` over `{σ ⪰ 0, σ^Γ ⪰ 0, Tr σ = 1}`. Only
//! `f(σ) = −Tr ρ ln σ` depends on σ. The solver is a spectral projected
//! gradient method: Barzilai-Borwein trial step, Dykstra projection onto the
//! feasible set, Armijo backtracking along the projected direction.
//!
//! When the minimizer sits close to the PSD boundary (rank-deficient ρ) the
//! projected gradient crawls. If it stops without certified stationarity the
//! result is polished by a log-barrier Newton method and the lower of the two
//! feasible values is kept.

mod barrier;

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::qcore::eigen::{hermitian_eig, EigenSystem};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::{partial_transpose, DensityMatrix};

pub const REE_MAX_ITERATIONS: usize = 5000;
const DYKSTRA_MAX_CYCLES: usize = 200;
const DYKSTRA_TOL: f64 = 1e-15;
const EIG_FLOOR: f64 = 1e-14;
const ARMIJO_SLOPE: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-12;
const BB_RANGE: (f64, f64) = (1e-10, 1e10);
/// The objective is flat to machine precision once the projected gradient
/// reaches about √ε, so stationarity is only demanded down to this level.
const STATIONARITY_FLOOR: f64 = 1e-6;
/// Consecutive small-change iterations accepted as convergence when the CSS
/// sits near the PSD boundary and the gradient norm decays sublinearly.
const FLAT_WINDOW: usize = 20;
const PPT_TOL: f64 = 1e-10;
const PURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReeMethod {
    /// ρ is PPT: `E_R = 0` with σ₀ = ρ.
    Separable,
    /// ρ is pure: entropy of the reduced state.
    PureState,
    ProjectedGradient,
    /// Projected gradient followed by log-barrier Newton polishing.
    InteriorPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReeDiagnostics {
    pub method: ReeMethod,
    pub converged: bool,
    pub iterations: usize,
    /// `‖Π(σ − ∇f) − σ‖_F` at the returned iterate.
    pub gradient_norm: f64,
    /// Frobenius gap between the two alternating projections at the last call.
    pub dykstra_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ReeResult {
    /// In bits.
    pub e_r: f64,
    /// Closest separable state found.
    pub css: DensityMatrix,
    pub diagnostics: ReeDiagnostics,
}

/// Relative entropy of entanglement in bits.
///
/// Iteration stops once the relative change of the objective drops below
/// `tol` (valid range `[1e-10, 1e-3]`) and either the projected-gradient
/// norm is below `max(tol, 1e-6)` or the objective has stayed flat for 20
/// iterations. Hitting the iteration cap is not an
/// error: the best iterate is returned with `converged = false`.
pub fn ree(rho: &DensityMatrix, tol: f64) -> Result<ReeResult> {
    check_range("ree tolerance", tol, 1e-10, 1e-3)?;

    let pt_min = hermitian_eig(&rho.partial_transpose())?.min();
    if pt_min >= -PPT_TOL {
        return Ok(ReeResult {
            e_r: 0.0,
            css: rho.clone(),
            diagnostics: ReeDiagnostics {
                method: ReeMethod::Separable,
                converged: true,
                iterations: 0,
                gradient_norm: 0.0,
                dykstra_residual: 0.0,
            },
        });
    }
    if let Some((e_r, css)) = pure_state_ree(rho)? {
        return Ok(ReeResult {
            e_r,
            css,
            diagnostics: ReeDiagnostics {
                method: ReeMethod::PureState,
                converged: true,
                iterations: 0,
                gradient_norm: 0.0,
                dykstra_residual: 0.0,
            },
        });
    }
    let first = projected_gradient(rho, tol)?;
    if first.diagnostics.converged && first.diagnostics.gradient_norm <= tol.max(STATIONARITY_FLOOR)
    {
        return Ok(first);
    }
    let polished = barrier::minimize(rho.matrix(), tol * LN_2);
    let e_r = ((neg_entropy_nats(rho) + polished.value) / LN_2).max(0.0);
    if !(e_r < first.e_r) {
        return Ok(first);
    }
    let gradient = evaluate(rho.matrix(), &polished.sigma).gradient;
    Ok(ReeResult {
        e_r,
        diagnostics: ReeDiagnostics {
            method: ReeMethod::InteriorPoint,
            converged: polished.converged,
            iterations: first.diagnostics.iterations + polished.newton_steps,
            gradient_norm: projected_gradient_norm(&polished.sigma, &gradient),
            dykstra_residual: first.diagnostics.dykstra_residual,
        },
        css: DensityMatrix::new(polished.sigma.hermitian_part())?,
    })
}

/// Entropy of the reduced state when ρ is pure (`Tr ρ² > 1 − 1e−10`).
pub fn ree_pure_shortcut(rho: &DensityMatrix) -> Option<f64> {
    if rho.purity() <= 1.0 - PURE_TOL {
        return None;
    }
    let es = hermitian_eig(&rho.reduced_a()).ok()?;
    Some(es.values.iter().map(|&m| entropy_term(m)).sum())
}

fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shortcut value plus the Schmidt-diagonal closest separable state
/// `Σ μ_i |a_i b_i⟩⟨a_i b_i|`.
fn pure_state_ree(rho: &DensityMatrix) -> Result<Option<(f64, DensityMatrix)>> {
    let Some(e_r) = ree_pure_shortcut(rho) else {
        return Ok(None);
    };
    let psi = rho.eigen().vector(3);
    // ψ as a 2x2 coefficient matrix Ψ_ab
    let coef = ComplexMatrix::from_fn(2, 2, |a, b| psi[2 * a + b]);
    let reduced = hermitian_eig(&(&coef * &coef.adjoint()))?;
    let mut css = ComplexMatrix::zeros(4, 4);
    for k in 0..2 {
        let mu = reduced.values[k];
        if mu <= 0.0 {
            continue;
        }
        let a: Vec<C64> = reduced.vector(k);
        let a_conj: Vec<C64> = a.iter().map(|z| z.conj()).collect();
        let b: Vec<C64> = coef
            .transpose()
            .apply(&a_conj)
            .iter()
            .map(|z| z / mu.sqrt())
            .collect();
        let ab: Vec<C64> = (0..4).map(|i| a[i / 2] * b[i % 2]).collect();
        css = &css + &ComplexMatrix::outer(&ab).scale_real(mu);
    }
    Ok(Some((e_r, DensityMatrix::new(css)?)))
}

/// Euclidean projection of a real vector onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto `{σ ⪰ 0, Tr σ = 1}`.
fn project_spectraplex(h: &ComplexMatrix) -> ComplexMatrix {
    let es = hermitian_eig(&h.hermitian_part()).expect("hermitian by construction");
    let w = project_simplex(&es.values);
    EigenSystem {
        values: w,
        vectors: es.vectors,
    }
    .reconstruct()
}

/// Projection onto `{σ : σ^Γ ⪰ 0, Tr σ = 1}`; Γ is a Frobenius isometry.
fn project_ppt_spectraplex(h: &ComplexMatrix) -> ComplexMatrix {
    partial_transpose(&project_spectraplex(&partial_transpose(h)))
}

/// Dykstra's alternating projections onto the intersection of the two
/// spectraplexes, followed by [`pull_inside`]. Returns the feasible point and
/// the final gap between the two projections.
fn project_feasible(y: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let mut x = y.clone();
    let mut p = ComplexMatrix::zeros(4, 4);
    let mut q = ComplexMatrix::zeros(4, 4);
    let mut gap = f64::INFINITY;
    for _ in 0..DYKSTRA_MAX_CYCLES {
        let a = project_spectraplex(&(&x + &p));
        p = &(&x + &p) - &a;
        let x_next = project_ppt_spectraplex(&(&a + &q));
        q = &(&a + &q) - &x_next;
        gap = (&a - &x_next).frobenius_norm();
        let moved = (&x_next - &x).frobenius_norm();
        x = x_next;
        if gap < DYKSTRA_TOL && moved < DYKSTRA_TOL {
            break;
        }
    }
    (pull_inside(&x), gap)
}

/// Mixes in the least amount of `I/4` that makes both `σ` and `σ^Γ` PSD.
/// `I/4` has all eigenvalues `1/4` in both pictures, so `t = −λ/(1/4 − λ)`
/// lifts a minimal eigenvalue `λ < 0` to exactly zero.
fn pull_inside(sigma: &ComplexMatrix) -> ComplexMatrix {
    let lift = |m: &ComplexMatrix| {
        let min = hermitian_eig(&m.hermitian_part()).expect("hermitian").min();
        if min < 0.0 {
            -min / (0.25 - min)
        } else {
            0.0
        }
    };
    let t = lift(sigma).max(lift(&partial_transpose(sigma)));
    if t == 0.0 {
        return sigma.clone();
    }
    &sigma.scale_real(1.0 - t) + &ComplexMatrix::identity(4).scale_real(0.25 * t)
}

fn real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// Logarithmic divided differences `(ln s_i − ln s_j)/(s_i − s_j)`.
fn log_divided_difference(si: f64, sj: f64) -> f64 {
    let gap = si - sj;
    if gap.abs() <= 1e-9 * si.max(sj) {
        2.0 / (si + sj)
    } else {
        (si.ln() - sj.ln()) / gap
    }
}

struct Evaluation {
    value: f64,
    gradient: ComplexMatrix,
}

/// `f(σ) = −Tr ρ ln σ`.
fn objective(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let es = hermitian_eig(&sigma.hermitian_part()).expect("hermitian by construction");
    let rho_hat = rho.compress(&es.vectors);
    -(0..4)
        .map(|i| rho_hat[(i, i)].re * es.values[i].max(EIG_FLOOR).ln())
        .sum::<f64>()
}

/// Value and gradient; the gradient uses the Daleckii-Krein formula
/// `D ln(σ)[H] = V (L ∘ V†HV) V†`.
fn evaluate(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Evaluation {
    let es = hermitian_eig(&sigma.hermitian_part()).expect("hermitian by construction");
    let s: Vec<f64> = es.values.iter().map(|&v| v.max(EIG_FLOOR)).collect();
    let rho_hat = rho.compress(&es.vectors);
    let value = -(0..4).map(|i| rho_hat[(i, i)].re * s[i].ln()).sum::<f64>();
    let g_hat = ComplexMatrix::from_fn(4, 4, |i, j| {
        -rho_hat[(i, j)] * log_divided_difference(s[i], s[j])
    });
    let v = &es.vectors;
    Evaluation {
        value,
        gradient: &(v * &g_hat) * &v.adjoint(),
    }
}

/// `‖Π(σ − G) − σ‖_F`.
fn projected_gradient_norm(sigma: &ComplexMatrix, gradient: &ComplexMatrix) -> f64 {
    let (target, _) = project_feasible(&(sigma - gradient));
    (&target - sigma).frobenius_norm()
}

fn neg_entropy_nats(rho: &DensityMatrix) -> f64 {
    rho.eigen()
        .values
        .iter()
        .map(|&r| if r > 0.0 { r * r.ln() } else { 0.0 })
        .sum()
}

fn projected_gradient(rho: &DensityMatrix, tol: f64) -> Result<ReeResult> {
    let r = rho.matrix();
    let start = &r.scale_real(0.9) + &ComplexMatrix::identity(4).scale_real(0.025);
    let (mut x, mut residual) = project_feasible(&start);
    let mut eval = evaluate(r, &x);
    if !eval.value.is_finite() {
        return Err(Error::SupportError);
    }

    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    let mut flat_steps = 0;
    while iterations < REE_MAX_ITERATIONS {
        iterations += 1;
        let trial = &x - &eval.gradient.scale_real(step);
        let (target, gap) = project_feasible(&trial);
        residual = gap;
        let d = &target - &x;
        let slope = real_inner(&eval.gradient, &d);
        if slope >= 0.0 || d.frobenius_norm() == 0.0 {
            // no descent direction left at working precision
            converged = true;
            break;
        }

        let mut lambda = 1.0;
        let accepted = loop {
            let cand = &x + &d.scale_real(lambda);
            let value = objective(r, &cand);
            if value.is_finite() && value <= eval.value + ARMIJO_SLOPE * lambda * slope {
                break Some(cand);
            }
            lambda *= BACKTRACK;
            if lambda < MIN_STEP {
                break None;
            }
        };
        let Some(next) = accepted else {
            converged = true;
            break;
        };

        let next_eval = evaluate(r, &next);
        let s = &next - &x;
        let y = &next_eval.gradient - &eval.gradient;
        let sy = real_inner(&s, &y);
        step = if sy > 0.0 {
            (real_inner(&s, &s) / sy).clamp(BB_RANGE.0, BB_RANGE.1)
        } else {
            BB_RANGE.1
        };
        let change = (eval.value - next_eval.value).abs();
        x = next;
        eval = next_eval;
        if change <= tol * eval.value.abs().max(1.0) {
            flat_steps += 1;
            if flat_steps >= FLAT_WINDOW
                || projected_gradient_norm(&x, &eval.gradient) <= tol.max(STATIONARITY_FLOOR)
            {
                converged = true;
                break;
            }
        } else {
            flat_steps = 0;
        }
    }

    let gradient_norm = projected_gradient_norm(&x, &eval.gradient);
    let e_r = ((neg_entropy_nats(rho) + eval.value) / LN_2).max(0.0);
    let css = DensityMatrix::new(x.hermitian_part())?;
    Ok(ReeResult {
        e_r,
        css,
        diagnostics: ReeDiagnostics {
            method: ReeMethod::ProjectedGradient,
            converged,
            iterations,
            gradient_norm,
            dykstra_residual: residual,
        },
    })
}
