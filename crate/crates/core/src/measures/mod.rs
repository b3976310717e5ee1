//! Scalar measures of a two-qubit state: the Horodecki quantity M, the CHSH
//! violation degree B, negativity, concurrence and relative entropy of
//! entanglement.

mod ree;

pub use ree::{ree, ree_pure_shortcut, ReeDiagnostics, ReeMethod, ReeResult, REE_MAX_ITERATIONS};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::eigen::{hermitian_eig, symmetric_eig3};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::{bloch_decompose, partial_transpose, pauli_pair, Axis, DensityMatrix};

/// Below this largest eigenvalue of `TᵀT` the optimal settings are undefined.
pub const DEGENERATE_CORRELATION_TOL: f64 = 1e-12;

/// Eigenvalues of `TᵀT`, descending.
pub fn correlation_spectrum(rho: &DensityMatrix) -> [f64; 3] {
    let ttt = bloch_decompose(rho).ttt();
    let (vals, _) = symmetric_eig3(&ttt).expect("TᵀT is symmetric");
    [vals[2], vals[1], vals[0]]
}

/// Sum of the two largest eigenvalues of `TᵀT`.
pub fn horodecki_m(rho: &DensityMatrix) -> f64 {
    let h = correlation_spectrum(rho);
    h[0] + h[1]
}

/// `√max(0, M − 1)`.
pub fn b_from_m(m: f64) -> f64 {
    (m - 1.0).max(0.0).sqrt()
}

pub fn chsh_violation_b(rho: &DensityMatrix) -> f64 {
    b_from_m(horodecki_m(rho))
}

/// Measurement directions for the CHSH operator
/// `a·σ ⊗ (b + b')·σ + a'·σ ⊗ (b − b')·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshSettings {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

impl ChshSettings {
    /// Normalizes all four directions; zero vectors are rejected.
    pub fn new(a: [f64; 3], a_prime: [f64; 3], b: [f64; 3], b_prime: [f64; 3]) -> Result<Self> {
        Ok(Self {
            a: unit(a)?,
            a_prime: unit(a_prime)?,
            b: unit(b)?,
            b_prime: unit(b_prime)?,
        })
    }

    /// The CHSH operator as a 4x4 matrix.
    pub fn operator(&self) -> ComplexMatrix {
        let plus = add(self.b, self.b_prime, 1.0);
        let minus = add(self.b, self.b_prime, -1.0);
        let mut acc = ComplexMatrix::zeros(4, 4);
        for m in Axis::ALL {
            for n in Axis::ALL {
                let (i, j) = (m.index(), n.index());
                let w = self.a[i] * plus[j] + self.a_prime[i] * minus[j];
                if w != 0.0 {
                    acc = &acc + &pauli_pair(m, n).scale_real(w);
                }
            }
        }
        acc
    }
}

fn unit(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = norm3(v);
    if !(n > 0.0) {
        return Err(crate::error::domain(
            "measurement direction must be nonzero",
        ));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn add(u: [f64; 3], v: [f64; 3], s: f64) -> [f64; 3] {
    [u[0] + s * v[0], u[1] + s * v[1], u[2] + s * v[2]]
}

fn mat_vec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|j| t[i][j] * v[j]).sum();
    }
    out
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// `Tr(ρ B_CHSH) = a·T(b + b') + a'·T(b − b')`.
pub fn chsh_expectation(rho: &DensityMatrix, s: &ChshSettings) -> f64 {
    let t = bloch_decompose(rho).t;
    dot(s.a, mat_vec(&t, add(s.b, s.b_prime, 1.0)))
        + dot(s.a_prime, mat_vec(&t, add(s.b, s.b_prime, -1.0)))
}

/// Settings reaching `2√M`.
///
/// Bob's directions are rotated by `θ = atan√(h₂/h₁)` around the top two
/// eigenvectors of `TᵀT`; Alice's follow `T c₁` and `T c₂`.
pub fn optimal_settings(rho: &DensityMatrix) -> Result<ChshSettings> {
    let t = bloch_decompose(rho).t;
    let mut ttt = [[0.0; 3]; 3];
    for (m, row) in ttt.iter_mut().enumerate() {
        for (n, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|k| t[k][m] * t[k][n]).sum();
        }
    }
    let (vals, vecs) = symmetric_eig3(&ttt)?;
    let (h1, h2) = (vals[2], vals[1].max(0.0));
    if h1 <= DEGENERATE_CORRELATION_TOL {
        return Err(Error::DegenerateCorrelation(h1));
    }
    let (c1, c2) = (vecs[2], vecs[1]);
    let theta = (h2 / h1).sqrt().atan();
    let (cos, sin) = (theta.cos(), theta.sin());
    let b = add(c1.map(|x| x * cos), c2.map(|x| x * sin), 1.0);
    let b_prime = add(c1.map(|x| x * cos), c2.map(|x| x * sin), -1.0);
    let tc1 = mat_vec(&t, c1);
    let tc2 = mat_vec(&t, c2);
    let a = unit(tc1)?;
    // with h₂ = 0 the second term carries no weight
    let a_prime = if norm3(tc2) > 1e-12 { unit(tc2)? } else { a };
    Ok(ChshSettings {
        a,
        a_prime,
        b: unit(b)?,
        b_prime: unit(b_prime)?,
    })
}

/// `max(0, −2 λ_min(ρ^Γ))`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let min = hermitian_eig(&rho.partial_transpose())
        .expect("partial transpose is hermitian")
        .min();
    (-2.0 * min).max(0.0)
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    let yy = pauli_pair(Axis::Y, Axis::Y);
    &(&yy * &rho.matrix().conj()) * &yy
}

/// Eigenvalues of ρ below this are treated as exact zeros before `√ρ`.
const SQRT_CLIP: f64 = 1e-13;

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λ_j` (square roots of the spectrum of `ρ ρ̃`) are the singular
/// values of `√ρ √ρ̃`. They are read off the Hermitian dilation
/// `[[0, A], [A†, 0]]`, whose eigenvalues are `±λ_j`. Taking square roots
/// of near-zero eigenvalues of `ρ ρ̃` instead would turn round-off of order
/// 1e-17 into errors of order 1e-9 for rank-deficient states.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let sqrt_rho = rho
        .eigen()
        .map_spectrum(|x| if x > SQRT_CLIP { x.sqrt() } else { 0.0 });
    let yy = pauli_pair(Axis::Y, Axis::Y);
    let sqrt_flip = &(&yy * &sqrt_rho.conj()) * &yy;
    let a = &sqrt_rho * &sqrt_flip;
    let dilation = ComplexMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, false) => a[(i, j - 4)],
        (false, true) => a[(j, i - 4)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    let es = hermitian_eig(&dilation).expect("hermitian by construction");
    // ascending, so the top four are λ₄ ≤ λ₃ ≤ λ₂ ≤ λ₁
    let l = &es.values[4..];
    (l[3] - l[2] - l[1] - l[0]).max(0.0)
}

/// Pure state `|ψ⟩` and `ψ^Γ` with `N(ρ) = −2 Tr[ψ^Γ ρ]`.
#[derive(Clone, Debug)]
pub struct NegativityWitness {
    pub psi: Vec<C64>,
    pub psi_gamma: ComplexMatrix,
}

/// Minimal eigenvector of `ρ^Γ` and its partial transpose.
pub fn negativity_witness(rho: &DensityMatrix) -> Result<NegativityWitness> {
    let es = hermitian_eig(&rho.partial_transpose())?;
    let n = (-2.0 * es.min()).max(0.0);
    if n <= 1e-10 {
        return Err(Error::NotEntangled(n));
    }
    let psi = es.vector(0);
    let psi_gamma = partial_transpose(&ComplexMatrix::outer(&psi));
    Ok(NegativityWitness { psi, psi_gamma })
}

/// `−x log₂ x − (1−x) log₂(1−x)`, zero at the endpoints.
pub fn binary_entropy(x: f64) -> Result<f64> {
    crate::error::check_range("x", x, 0.0, 1.0)?;
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// All measures of one state.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "E_R")]
    pub e_r: f64,
    pub ree_method: ReeMethod,
    pub ree_converged: bool,
    pub ree_iterations: usize,
    pub ree_gradient_norm: f64,
    pub ree_dykstra_residual: f64,
}

pub fn measure_all(rho: &DensityMatrix, ree_tol: f64) -> Result<MeasureReport> {
    let m = horodecki_m(rho);
    let r = ree(rho, ree_tol)?;
    Ok(MeasureReport {
        m,
        b: b_from_m(m),
        n: negativity(rho),
        c: concurrence(rho),
        e_r: r.e_r,
        ree_method: r.diagnostics.method,
        ree_converged: r.diagnostics.converged,
        ree_iterations: r.diagnostics.iterations,
        ree_gradient_norm: r.diagnostics.gradient_norm,
        ree_dykstra_residual: r.diagnostics.dykstra_residual,
    })
}
