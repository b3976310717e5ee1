//! Log-barrier Newton method for `min −Tr ρ ln σ` over PPT states.
//!
//! σ is parametrized as `I/4 + Σ x_k E_k` with `E_k = σ_a ⊗ σ_b / 2`, an
//! orthonormal basis of traceless Hermitian 4x4 matrices. Partial transpose
//! only flips the sign of the `b = y` coordinates, so both cones stay
//! explicit. Each centering step minimizes
//! `t f(σ) − ln det σ − ln det σ^Γ` by damped Newton with the exact Hessian.
//! The barrier parameter is 8, so a central point at `t` is within `8/t` of
//! the optimum.

use crate::qcore::eigen::hermitian_eig;
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::{pauli, Axis};

use super::log_divided_difference;

const DIM: usize = 15;
const BARRIER_PARAMETER: f64 = 8.0;
const T_GROWTH: f64 = 10.0;
const MAX_NEWTON_PER_CENTER: usize = 60;
const NEWTON_DECREMENT_TOL: f64 = 1e-8;
const NOISE_DECREMENT: f64 = 1e-3;
const CLOSE: f64 = 1e-6;

pub(super) struct BarrierOutcome {
    pub sigma: ComplexMatrix,
    pub value: f64,
    pub newton_steps: usize,
    pub converged: bool,
}

struct Basis {
    elements: Vec<ComplexMatrix>,
    /// −1 where partial transpose flips the element.
    flips: [f64; DIM],
}

fn basis() -> Basis {
    let paulis = [
        ComplexMatrix::identity(2),
        pauli(Axis::X),
        pauli(Axis::Y),
        pauli(Axis::Z),
    ];
    let mut elements = Vec::with_capacity(DIM);
    let mut flips = [1.0; DIM];
    for a in 0..4 {
        for b in 0..4 {
            if a == 0 && b == 0 {
                continue;
            }
            if b == 2 {
                flips[elements.len()] = -1.0;
            }
            elements.push(paulis[a].kron(&paulis[b]).scale_real(0.5));
        }
    }
    Basis { elements, flips }
}

fn assemble(basis: &Basis, x: &[f64; DIM], flip: bool) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(4).scale_real(0.25);
    for k in 0..DIM {
        let w = if flip { x[k] * basis.flips[k] } else { x[k] };
        if w != 0.0 {
            m = &m + &basis.elements[k].scale_real(w);
        }
    }
    m
}

/// Second divided difference of ln.
fn log_second_difference(a: f64, b: f64, c: f64) -> f64 {
    let (mut lo, mut mid, mut hi) = (a, b, c);
    if lo > mid {
        std::mem::swap(&mut lo, &mut mid);
    }
    if mid > hi {
        std::mem::swap(&mut mid, &mut hi);
    }
    if lo > mid {
        std::mem::swap(&mut lo, &mut mid);
    }
    if hi - lo <= CLOSE * hi {
        let m = (lo + mid + hi) / 3.0;
        return -0.5 / (m * m);
    }
    (log_divided_difference(hi, mid) - log_divided_difference(mid, lo)) / (hi - lo)
}

/// Everything Newton needs at one point, or `None` outside the open cones.
struct Local {
    barrier_value: f64,
    objective: f64,
    gradient: [f64; DIM],
    hessian: [[f64; DIM]; DIM],
}

fn local(rho: &ComplexMatrix, basis: &Basis, x: &[f64; DIM], t: f64) -> Option<Local> {
    let sigma = assemble(basis, x, false);
    let sigma_pt = assemble(basis, x, true);
    let es = hermitian_eig(&sigma).ok()?;
    let ep = hermitian_eig(&sigma_pt).ok()?;
    if es.min() <= 0.0 || ep.min() <= 0.0 {
        return None;
    }
    let s = &es.values;
    let q = &ep.values;
    let v = &es.vectors;
    let w = &ep.vectors;
    let rho_hat = rho.compress(v);

    let objective = -(0..4).map(|i| rho_hat[(i, i)].re * s[i].ln()).sum::<f64>();
    let log_det: f64 = s.iter().chain(q.iter()).map(|z| z.ln()).sum();

    let e_sigma: Vec<ComplexMatrix> = basis.elements.iter().map(|e| e.compress(v)).collect();
    let e_pt: Vec<ComplexMatrix> = basis
        .elements
        .iter()
        .zip(basis.flips)
        .map(|(e, f)| e.scale_real(f).compress(w))
        .collect();

    let mut l1 = [[0.0; 4]; 4];
    let mut l2 = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            l1[i][j] = log_divided_difference(s[i], s[j]);
            for m in 0..4 {
                l2[i][m][j] = log_second_difference(s[i], s[m], s[j]);
            }
        }
    }

    let mut gradient = [0.0; DIM];
    for k in 0..DIM {
        let ek = &e_sigma[k];
        let mut df = 0.0;
        let mut db = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                df -= (rho_hat[(j, i)] * ek[(i, j)]).re * l1[i][j];
            }
            db += ek[(i, i)].re / s[i] + e_pt[k][(i, i)].re / q[i];
        }
        gradient[k] = t * df - db;
    }

    let mut hessian = [[0.0; DIM]; DIM];
    for k in 0..DIM {
        for l in k..DIM {
            let (ek, el) = (&e_sigma[k], &e_sigma[l]);
            let (pk, pl) = (&e_pt[k], &e_pt[l]);
            let mut hf = 0.0;
            let mut hb = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for m in 0..4 {
                        acc += (ek[(i, m)] * el[(m, j)] + el[(i, m)] * ek[(m, j)]) * l2[i][m][j];
                    }
                    hf -= (rho_hat[(j, i)] * acc).re;
                    hb += (ek[(i, j)] * el[(j, i)]).re / (s[i] * s[j])
                        + (pk[(i, j)] * pl[(j, i)]).re / (q[i] * q[j]);
                }
            }
            hessian[k][l] = t * hf + hb;
            hessian[l][k] = hessian[k][l];
        }
    }

    Some(Local {
        barrier_value: t * objective - log_det,
        objective,
        gradient,
        hessian,
    })
}

/// Value of the barrier function only, for the line search.
fn barrier_value(rho: &ComplexMatrix, basis: &Basis, x: &[f64; DIM], t: f64) -> Option<f64> {
    let es = hermitian_eig(&assemble(basis, x, false)).ok()?;
    let ep = hermitian_eig(&assemble(basis, x, true)).ok()?;
    if es.min() <= 0.0 || ep.min() <= 0.0 {
        return None;
    }
    let rho_hat = rho.compress(&es.vectors);
    let objective = -(0..4)
        .map(|i| rho_hat[(i, i)].re * es.values[i].ln())
        .sum::<f64>();
    let log_det: f64 = es
        .values
        .iter()
        .chain(ep.values.iter())
        .map(|z| z.ln())
        .sum();
    Some(t * objective - log_det)
}

/// Solves `H d = −g` by Cholesky after symmetric diagonal scaling.
fn newton_direction(h: &[[f64; DIM]; DIM], g: &[f64; DIM]) -> Option<[f64; DIM]> {
    let scale: Vec<f64> = (0..DIM)
        .map(|i| 1.0 / h[i][i].max(f64::MIN_POSITIVE).sqrt())
        .collect();
    let mut a = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            a[i][j] = h[i][j] * scale[i] * scale[j];
        }
    }
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(l) = cholesky(&a, shift) {
            let mut y = [0.0; DIM];
            for i in 0..DIM {
                let mut acc = -g[i] * scale[i];
                for k in 0..i {
                    acc -= l[i][k] * y[k];
                }
                y[i] = acc / l[i][i];
            }
            let mut z = [0.0; DIM];
            for i in (0..DIM).rev() {
                let mut acc = y[i];
                for k in i + 1..DIM {
                    acc -= l[k][i] * z[k];
                }
                z[i] = acc / l[i][i];
            }
            let mut d = [0.0; DIM];
            for i in 0..DIM {
                d[i] = z[i] * scale[i];
            }
            return Some(d);
        }
        shift = if shift == 0.0 { 1e-14 } else { shift * 100.0 };
    }
    None
}

fn cholesky(a: &[[f64; DIM]; DIM], shift: f64) -> Option<[[f64; DIM]; DIM]> {
    let mut l = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..=i {
            let mut acc = a[i][j];
            if i == j {
                acc += shift;
            }
            for k in 0..j {
                acc -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(acc > 0.0) {
                    return None;
                }
                l[i][i] = acc.sqrt();
            } else {
                l[i][j] = acc / l[j][j];
            }
        }
    }
    Some(l)
}

/// Path-following from `I/4` until the duality gap bound `8/t` drops below `gap`.
pub(super) fn minimize(rho: &ComplexMatrix, gap: f64) -> BarrierOutcome {
    let basis = basis();
    let mut x = [0.0; DIM];
    let mut t = 1.0;
    let mut newton_steps = 0;
    let mut converged = true;
    loop {
        let mut centered = false;
        let mut last_decrement = f64::INFINITY;
        for _ in 0..MAX_NEWTON_PER_CENTER {
            let Some(here) = local(rho, &basis, &x, t) else {
                break;
            };
            let Some(d) = newton_direction(&here.hessian, &here.gradient) else {
                break;
            };
            let slope: f64 = (0..DIM).map(|k| here.gradient[k] * d[k]).sum();
            let decrement = -slope / 2.0;
            // past the noise floor the decrement stops shrinking quadratically
            if decrement <= NEWTON_DECREMENT_TOL
                || (decrement <= NOISE_DECREMENT && decrement > 0.5 * last_decrement)
            {
                centered = true;
                break;
            }
            last_decrement = decrement;
            newton_steps += 1;
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-12 {
                let mut cand = x;
                for k in 0..DIM {
                    cand[k] += alpha * d[k];
                }
                if let Some(v) = barrier_value(rho, &basis, &cand, t) {
                    if v <= here.barrier_value + 0.25 * alpha * slope {
                        moved = cand != x;
                        x = cand;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                // stalled at working precision; treat as centered
                centered = true;
                break;
            }
        }
        converged &= centered;
        if BARRIER_PARAMETER / t <= gap {
            break;
        }
        t *= T_GROWTH;
    }
    let sigma = assemble(&basis, &x, false);
    let value = local(rho, &basis, &x, t).map_or(f64::INFINITY, |l| l.objective);
    BarrierOutcome {
        sigma,
        value,
        newton_steps,
        converged,
    }
}
