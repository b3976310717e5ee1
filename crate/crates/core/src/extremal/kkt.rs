//! Stationarity test for "maximal negativity at fixed CHSH violation".
//!
//! The Lagrangian `B(ρ) + l[N/2 − Tr ρψ^Γ] − Tr Xρ + λ(Tr ρ − 1)` is
//! stationary when `X = B′ − B + l(N/2 + ψ^Γ)` annihilates the support of
//! ρ and is positive on its kernel. `B` is not differentiable where the
//! second and third eigenvalues of `TᵀT` coincide, which is exactly where
//! the optimal amplitude-damped states sit. There `B′` ranges over the
//! subdifferential
//!
//! `B′_P = (Σ_ij (TP)_ij σ_i⊗σ_j − I)/B`, `0 ⪯ P ⪯ I`, `Tr P = 2`,
//!
//! with `P` fixed outside the degenerate eigenspace. The multiplier `l` and
//! the free part of `P` are found by least squares. When that system leaves
//! directions free (pure states), subgradient ascent along them looks for a
//! point with `P` feasible and X positive on the kernel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{amplitude_damped, AmplitudeDampedParams};
use crate::measures::{horodecki_m, negativity, negativity_witness};
use crate::qcore::eigen::{hermitian_eig, symmetric_eig3};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::{bloch_decompose, pauli_pair, Axis, DensityMatrix};

/// Eigenvalues of ρ above this span its support.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Relative gap below which eigenvalues of `TᵀT` count as degenerate.
const CLUSTER_TOL: f64 = 1e-9;
/// `M − 1` (or the printed η radicand) at or below this has no gradient.
const UNDEFINED_RADICAND: f64 = 1e-12;
/// Eigenvalues of `AᵀA` below this (times `max(1, ‖AᵀA‖)`) are treated as
/// null directions: singular values under 1e-10 move X by rounding only.
const PINV_CUTOFF: f64 = 1e-20;
const FEASIBILITY_STEPS: usize = 2000;

/// Eigenvalue with its eigenvector.
type EigenPair = (f64, Vec<C64>);

/// CHSH gradient operator of an amplitude-damped state in the closed form
/// `η₁[(1−2p)σ_z⊗σ_z + 2p√(α(1−α))σ_x⊗σ_x − 1]` when
/// `4p²α(1−α) < (1−2p)²`, else `η₂[2p√(α(1−α))(σ_x⊗σ_x + σ_y⊗σ_y) − 1]`.
pub fn chsh_gradient_operator(params: AmplitudeDampedParams) -> Result<ComplexMatrix> {
    let AmplitudeDampedParams { alpha, p } = params;
    let c = params.coherence();
    let tz = 1.0 - 2.0 * p;
    let id = ComplexMatrix::identity(4);
    let xx = pauli_pair(Axis::X, Axis::X);
    if 4.0 * p * p * alpha * (1.0 - alpha) - tz * tz < 0.0 {
        let radicand = tz * tz + c * c - 1.0;
        if radicand <= UNDEFINED_RADICAND {
            return Err(Error::UndefinedGradient(radicand));
        }
        let zz = pauli_pair(Axis::Z, Axis::Z);
        let inner = &(&zz.scale_real(tz) + &xx.scale_real(c)) - &id;
        Ok(inner.scale_real(1.0 / radicand.sqrt()))
    } else {
        let radicand = 8.0 * p * p * alpha * (1.0 - alpha) - 1.0;
        if radicand <= UNDEFINED_RADICAND {
            return Err(Error::UndefinedGradient(radicand));
        }
        let yy = pauli_pair(Axis::Y, Axis::Y);
        let inner = &(&xx + &yy).scale_real(c) - &id;
        Ok(inner.scale_real(1.0 / radicand.sqrt()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KktReport {
    pub l: f64,
    pub lambda: f64,
    #[serde(rename = "X")]
    pub x: ComplexMatrix,
    pub min_eig_x_on_support: f64,
    pub trace_x_rho: f64,
    /// `⟨e₁|X|e₁⟩` for the dominant eigenvector `e₁` of ρ.
    pub condition1_residual: f64,
    /// `max_s ‖X e_s‖` over the support eigenvectors.
    pub stationarity_residual: f64,
    /// Smallest eigenvalue of X on the kernel of ρ.
    pub kernel_min_eig: f64,
    /// Subgradient matrix `P` of `M` with respect to `TᵀT`.
    pub subgradient: [[f64; 3]; 3],
    pub subgradient_feasible: bool,
    pub rank: usize,
    pub pass: bool,
}

pub fn kkt_check(params: AmplitudeDampedParams, tol: f64) -> Result<KktReport> {
    kkt_check_state(&amplitude_damped(params), tol)
}

/// Same test for any state of rank at most two.
pub fn kkt_check_state(rho: &DensityMatrix, tol: f64) -> Result<KktReport> {
    let es = rho.eigen();
    let support: Vec<usize> = (0..4).filter(|&k| es.values[k] > SUPPORT_TOL).collect();
    let kernel: Vec<usize> = (0..4).filter(|&k| es.values[k] <= SUPPORT_TOL).collect();
    if support.len() > 2 {
        return Err(Error::RankError(support.len()));
    }
    let m = horodecki_m(rho);
    if m - 1.0 <= UNDEFINED_RADICAND {
        return Err(Error::UndefinedGradient(m - 1.0));
    }
    let b = (m - 1.0).sqrt();
    let n = negativity(rho);
    let psi_gamma = negativity_witness(rho)?.psi_gamma;

    let t = bloch_decompose(rho).t;
    let subgradients = SubgradientSet::new(&t)?;

    // X(u) = X₀ + Σ u_k X_k with u = (l, w₁, …)
    let id = ComplexMatrix::identity(4);
    let base = &chsh_subgradient(&t, &subgradients.center, b) - &id.scale_real(b);
    let mut directions = vec![&id.scale_real(n / 2.0) + &psi_gamma];
    for dir in &subgradients.directions {
        directions.push(chsh_subgradient_linear(&t, dir, b));
    }

    let support_vectors: Vec<Vec<C64>> = support.iter().map(|&k| es.vector(k)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in &support_vectors {
        let x0e = base.apply(e);
        let dirs: Vec<Vec<C64>> = directions.iter().map(|d| d.apply(e)).collect();
        for i in 0..4 {
            rows.push(dirs.iter().map(|v| v[i].re).collect::<Vec<_>>());
            rhs.push(-x0e[i].re);
            rows.push(dirs.iter().map(|v| v[i].im).collect::<Vec<_>>());
            rhs.push(-x0e[i].im);
        }
    }
    let (u0, null_space) = least_squares(&rows, &rhs)?;
    let kernel_basis = ComplexMatrix::from_fn(4, kernel.len(), |i, j| es.vectors[(i, kernel[j])]);
    let assemble = |u: &[f64]| {
        let mut x = base.clone();
        for (uk, dk) in u.iter().zip(&directions) {
            x = &x + &dk.scale_real(*uk);
        }
        x.hermitian_part()
    };
    let u = if null_space.is_empty() {
        u0
    } else {
        let margin = |u: &[f64]| -> Result<(f64, Vec<f64>)> {
            let mut best = (f64::INFINITY, vec![0.0; u.len()]);
            let mut consider = |value: f64, grad: Vec<f64>| {
                if value < best.0 {
                    best = (value, grad);
                }
            };
            let (w_min, w_max) = subgradients.extreme_eigen(&u[1..])?;
            let w_grad = |v: &[C64], sign: f64| -> Vec<f64> {
                let mut g = vec![0.0];
                g.extend(
                    subgradients
                        .w_directions
                        .iter()
                        .map(|d| sign * quadratic_form(d, v)),
                );
                g
            };
            consider(w_min.0, w_grad(&w_min.1, 1.0));
            consider(1.0 - w_max.0, w_grad(&w_max.1, -1.0));
            if !kernel.is_empty() {
                let block = hermitian_eig(&assemble(u).compress(&kernel_basis).hermitian_part())?;
                let v = kernel_basis.apply(&block.vector(0));
                let g = directions.iter().map(|d| d.sandwich(&v, &v).re).collect();
                consider(block.values[0], g);
            }
            Ok(best)
        };
        ascend_in_null_space(u0, &null_space, margin)?
    };

    let x = assemble(&u);
    let l = u[0];
    let p = subgradients.point(&u[1..]);

    let stationarity_residual = support_vectors
        .iter()
        .map(|e| x.apply(e).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let restrict = |idx: &[usize]| -> Result<f64> {
        if idx.is_empty() {
            return Ok(0.0);
        }
        let v = ComplexMatrix::from_fn(4, idx.len(), |i, j| es.vectors[(i, idx[j])]);
        Ok(hermitian_eig(&x.compress(&v).hermitian_part())?.min())
    };
    let min_eig_x_on_support = restrict(&support)?;
    let kernel_min_eig = restrict(&kernel)?;
    let trace_x_rho = x.trace_product(rho.matrix()).re;
    let e1 = es.vector(3);
    let condition1_residual = x.sandwich(&e1, &e1).re;
    let subgradient_feasible = subgradients.feasible(&u[1..], tol)?;

    let pass = min_eig_x_on_support >= -tol
        && trace_x_rho.abs() <= tol
        && condition1_residual.abs() <= tol
        && stationarity_residual <= tol
        && kernel_min_eig >= -tol
        && subgradient_feasible;
    Ok(KktReport {
        l,
        lambda: l * n / 2.0 - b,
        x,
        min_eig_x_on_support,
        trace_x_rho,
        condition1_residual,
        stationarity_residual,
        kernel_min_eig,
        subgradient: p,
        subgradient_feasible,
        rank: support.len(),
        pass,
    })
}

/// `(Σ_ij (TP)_ij σ_i⊗σ_j − I)/B`.
fn chsh_subgradient(t: &[[f64; 3]; 3], p: &[[f64; 3]; 3], b: f64) -> ComplexMatrix {
    let linear = chsh_subgradient_linear(t, p, b);
    &linear - &ComplexMatrix::identity(4).scale_real(1.0 / b)
}

/// `Σ_ij (TP)_ij σ_i⊗σ_j / B`, the part linear in `P`.
fn chsh_subgradient_linear(t: &[[f64; 3]; 3], p: &[[f64; 3]; 3], b: f64) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(4, 4);
    for a in Axis::ALL {
        for c in Axis::ALL {
            let (i, j) = (a.index(), c.index());
            let tp: f64 = (0..3).map(|k| t[i][k] * p[k][j]).sum();
            if tp != 0.0 {
                acc = &acc + &pauli_pair(a, c).scale_real(tp / b);
            }
        }
    }
    acc
}

/// `{P = P_fixed + V W Vᵀ : 0 ⪯ W ⪯ I, Tr W = slots}` in affine coordinates.
struct SubgradientSet {
    /// Cluster eigenvectors of `TᵀT` (rows).
    cluster: Vec<[f64; 3]>,
    slots: f64,
    /// `P` at `W = (slots/k) I`.
    center: [[f64; 3]; 3],
    /// Traceless symmetric directions of `W`, mapped to `P`.
    directions: Vec<[[f64; 3]; 3]>,
    /// Same directions as `k×k` matrices in the cluster basis.
    w_directions: Vec<Vec<Vec<f64>>>,
}

impl SubgradientSet {
    fn new(t: &[[f64; 3]; 3]) -> Result<Self> {
        let mut ttt = [[0.0; 3]; 3];
        for (m, row) in ttt.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| t[k][m] * t[k][n]).sum();
            }
        }
        let (vals, vecs) = symmetric_eig3(&ttt)?;
        // descending
        let h = [vals[2], vals[1], vals[0]];
        let v = [vecs[2], vecs[1], vecs[0]];
        let gap = CLUSTER_TOL * h[0].max(1.0);
        let above: Vec<usize> = (0..3).filter(|&i| h[i] > h[1] + gap).collect();
        let cluster_idx: Vec<usize> = (0..3).filter(|&i| (h[i] - h[1]).abs() <= gap).collect();
        let cluster: Vec<[f64; 3]> = cluster_idx.iter().map(|&i| v[i]).collect();
        let slots = (2 - above.len()) as f64;
        let k = cluster.len();

        let outer = |a: &[f64; 3], c: &[f64; 3], w: f64| {
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = w * a[i] * c[j];
                }
            }
            out
        };
        let add = |acc: &mut [[f64; 3]; 3], m: [[f64; 3]; 3]| {
            for i in 0..3 {
                for j in 0..3 {
                    acc[i][j] += m[i][j];
                }
            }
        };

        let mut center = [[0.0; 3]; 3];
        for &i in &above {
            add(&mut center, outer(&v[i], &v[i], 1.0));
        }
        for c in &cluster {
            add(&mut center, outer(c, c, slots / k as f64));
        }

        let mut w_directions = Vec::new();
        if (slots as usize) < k {
            for d in 0..k - 1 {
                let mut w = vec![vec![0.0; k]; k];
                w[d][d] = 1.0;
                w[d + 1][d + 1] = -1.0;
                w_directions.push(w);
            }
            for i in 0..k {
                for j in i + 1..k {
                    let mut w = vec![vec![0.0; k]; k];
                    w[i][j] = 1.0;
                    w[j][i] = 1.0;
                    w_directions.push(w);
                }
            }
        }
        let directions = w_directions
            .iter()
            .map(|w| {
                let mut p = [[0.0; 3]; 3];
                for i in 0..k {
                    for j in 0..k {
                        if w[i][j] != 0.0 {
                            add(&mut p, outer(&cluster[i], &cluster[j], w[i][j]));
                        }
                    }
                }
                p
            })
            .collect();
        Ok(Self {
            cluster,
            slots,
            center,
            directions,
            w_directions,
        })
    }

    fn point(&self, coords: &[f64]) -> [[f64; 3]; 3] {
        let mut p = self.center;
        for (c, dir) in coords.iter().zip(&self.directions) {
            for i in 0..3 {
                for j in 0..3 {
                    p[i][j] += c * dir[i][j];
                }
            }
        }
        p
    }

    fn w_matrix(&self, coords: &[f64]) -> ComplexMatrix {
        let k = self.cluster.len();
        let mut w = ComplexMatrix::identity(k).scale_real(self.slots / k as f64);
        for (c, dir) in coords.iter().zip(&self.w_directions) {
            let d = ComplexMatrix::from_fn(k, k, |i, j| C64::new(dir[i][j], 0.0));
            w = &w + &d.scale_real(*c);
        }
        w
    }

    /// Smallest and largest eigenpairs of `W`.
    fn extreme_eigen(&self, coords: &[f64]) -> Result<(EigenPair, EigenPair)> {
        let es = hermitian_eig(&self.w_matrix(coords))?;
        let last = es.dim() - 1;
        Ok((
            (es.values[0], es.vector(0)),
            (es.values[last], es.vector(last)),
        ))
    }

    /// Whether `W` has its eigenvalues in `[−tol, 1 + tol]`.
    fn feasible(&self, coords: &[f64], tol: f64) -> Result<bool> {
        let es = hermitian_eig(&self.w_matrix(coords))?;
        Ok(es.min() >= -tol && es.max() <= 1.0 + tol)
    }
}

/// `vᵀ D v` for a real symmetric `D` and complex `v`.
fn quadratic_form(d: &[Vec<f64>], v: &[C64]) -> f64 {
    let mut acc = 0.0;
    for (i, row) in d.iter().enumerate() {
        for (j, &dij) in row.iter().enumerate() {
            acc += dij * (v[i].conj() * v[j]).re;
        }
    }
    acc
}

/// Maximizes a concave margin over `u0 + span(null_space)` by normalized
/// subgradient ascent with step `1/√(k+1)`, stopping once it is nonnegative.
fn ascend_in_null_space(
    u0: Vec<f64>,
    null_space: &[Vec<f64>],
    margin: impl Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
) -> Result<Vec<f64>> {
    let mut u = u0;
    let (mut best_value, _) = margin(&u)?;
    let mut best = u.clone();
    for k in 0..FEASIBILITY_STEPS {
        let (value, grad) = margin(&u)?;
        if value > best_value {
            best_value = value;
            best = u.clone();
        }
        if value >= 0.0 {
            break;
        }
        let coords: Vec<f64> = null_space
            .iter()
            .map(|n| n.iter().zip(&grad).map(|(a, b)| a * b).sum())
            .collect();
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let step = 1.0 / ((k + 1) as f64).sqrt() / norm;
        for (c, n) in coords.iter().zip(null_space) {
            for (ui, ni) in u.iter_mut().zip(n) {
                *ui += step * c * ni;
            }
        }
    }
    Ok(best)
}

/// Minimum-norm least-squares solution via the pseudo-inverse of `AᵀA`,
/// plus an orthonormal basis of the directions the system leaves free.
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = rows.first().map_or(0, Vec::len);
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (row, &r) in rows.iter().zip(rhs) {
        for i in 0..n {
            atb[i] += row[i] * r;
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let es = hermitian_eig(&ComplexMatrix::from_fn(n, n, |i, j| {
        C64::new(ata[i][j], 0.0)
    }))?;
    let cutoff = PINV_CUTOFF * es.max().max(1.0);
    let mut u = vec![0.0; n];
    let mut null_space = Vec::new();
    for k in 0..n {
        let s = es.values[k];
        let v: Vec<f64> = (0..n).map(|i| es.vectors[(i, k)].re).collect();
        if s <= cutoff {
            null_space.push(v);
            continue;
        }
        let coef: f64 = v.iter().zip(&atb).map(|(a, b)| a * b).sum::<f64>() / s;
        for i in 0..n {
            u[i] += coef * v[i];
        }
    }
    Ok((u, null_space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{horodecki_state, rho_max, rho_max_params};
    use crate::measures::chsh_violation_b;

    #[test]
    fn printed_operator_reproduces_b() {
        let params = AmplitudeDampedParams::new(0.5, 0.95).unwrap();
        let rho = amplitude_damped(params);
        let op = chsh_gradient_operator(params).unwrap();
        let want = (2.0 * 0.95f64.powi(2) - 1.0).sqrt();
        assert!((rho.expectation(&op) - want).abs() < 1e-12);
        assert!((chsh_violation_b(&rho) - want).abs() < 1e-12);

        let params = rho_max_params(0.5, 1.0).unwrap();
        let op = chsh_gradient_operator(params).unwrap();
        assert!((rho_max(0.5, 1.0).unwrap().expectation(&op) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn printed_operator_undefined_without_violation() {
        let params = AmplitudeDampedParams::new(0.5, 0.5).unwrap();
        assert!(matches!(
            chsh_gradient_operator(params),
            Err(Error::UndefinedGradient(_))
        ));
    }

    #[test]
    fn passes_on_the_optimal_family() {
        let report = kkt_check(rho_max_params(0.5, 1.0).unwrap(), 1e-8).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.rank, 2);
        assert!(report.subgradient_feasible);
    }

    #[test]
    fn fails_off_the_family() {
        let report = kkt_check(AmplitudeDampedParams::new(0.35, 0.99).unwrap(), 1e-8).unwrap();
        assert!(!report.pass);
        assert!(report.stationarity_residual > 1e-3);
    }

    #[test]
    fn bell_state_endpoint() {
        let report = kkt_check(AmplitudeDampedParams::new(0.5, 1.0).unwrap(), 1e-8).unwrap();
        assert_eq!(report.rank, 1);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            kkt_check_state(&horodecki_state(0.5).unwrap(), 1e-8),
            Err(Error::UndefinedGradient(_))
        ));
        let werner = crate::families::werner(0.9).unwrap();
        assert!(matches!(
            kkt_check_state(&werner, 1e-8),
            Err(Error::RankError(4))
        ));
    }

    #[test]
    fn least_squares_exact_system() {
        let rows = vec![vec![2.0, 0.0], vec![0.0, 4.0], vec![1.0, 1.0]];
        let (u, null) = least_squares(&rows, &[2.0, 8.0, 3.0]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-12 && (u[1] - 2.0).abs() < 1e-12);
        assert!(null.is_empty());
        let (_, null) = least_squares(&[vec![1.0, 1.0]], &[1.0]).unwrap();
        assert_eq!(null.len(), 1);
    }
}
