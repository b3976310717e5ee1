//! Two-qubit density matrices, Pauli structure and the Bloch picture.
//!
//! Basis order is |00>, |01>, |10>, |11> (index `2a + b`), Pauli order x, y, z.

use std::fmt;

use crate::error::{Error, Result, StateCheck};
use crate::qcore::eigen::{hermitian_eig, EigenSystem};
use crate::qcore::matrix::{tensor, ComplexMatrix, C64, I, ONE, ZERO};

/// Absolute tolerance for Hermiticity, trace and positivity of a state.
pub const VALIDATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }

    pub fn pauli(self) -> ComplexMatrix {
        pauli(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let data = match axis {
        Axis::X => vec![ZERO, ONE, ONE, ZERO],
        Axis::Y => vec![ZERO, -I, I, ZERO],
        Axis::Z => vec![ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix::from_vec(2, 2, data).expect("2x2")
}

/// `σ_m ⊗ σ_n`.
pub fn pauli_pair(m: Axis, n: Axis) -> ComplexMatrix {
    tensor(&pauli(m), &pauli(n))
}

/// Validated two-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl serde::Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.mat.serialize(serializer)
    }
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, unit trace and positivity at [`VALIDATION_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(Error::InvalidState {
                check: StateCheck::Dimension,
                value: (mat.rows() * mat.cols()) as f64,
            });
        }
        let herm = mat.hermiticity_residual();
        if !(herm <= VALIDATION_TOL) {
            return Err(Error::InvalidState {
                check: StateCheck::Hermitian,
                value: herm,
            });
        }
        let tr = mat.trace();
        let trace_err = (tr - ONE).norm();
        if !(trace_err <= VALIDATION_TOL) {
            return Err(Error::InvalidState {
                check: StateCheck::Trace,
                value: tr.re,
            });
        }
        let min = hermitian_eig(&mat)?.min();
        if min < -VALIDATION_TOL {
            return Err(Error::InvalidState {
                check: StateCheck::Psd,
                value: min,
            });
        }
        Ok(Self { mat })
    }

    /// Normalized projector onto `psi`.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        if psi.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4-component vector".into(),
                got: format!("{} components", psi.len()),
            });
        }
        let norm = crate::qcore::matrix::vec_norm(psi);
        if !(norm > 0.0) {
            return Err(crate::error::domain("zero state vector"));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v))
    }

    /// `Σ w_k ρ_k`; the weights must be a probability vector.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(crate::error::domain(
                "mixture weights must be a probability vector",
            ));
        }
        let mut acc = ComplexMatrix::zeros(4, 4);
        for (w, rho) in parts {
            acc = &acc + &rho.mat.scale_real(*w);
        }
        Self::new(acc)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::diag(&[0.25; 4]),
        }
    }

    /// Computational basis projector `|ab><ab|`.
    pub fn basis(a: u8, b: u8) -> Self {
        let mut d = [0.0; 4];
        d[2 * (a as usize & 1) + (b as usize & 1)] = 1.0;
        Self {
            mat: ComplexMatrix::diag(&d),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigen(&self) -> EigenSystem {
        hermitian_eig(&self.mat).expect("validated state is hermitian")
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigen().values.iter().filter(|&&v| v > tol).count()
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.mat)
    }

    /// `Tr(ρ O)`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        self.mat.trace_product(op).re
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = tensor(ua, ub);
        Self::new(&(&u * &self.mat) * &u.adjoint())
    }

    /// Reduced state of the first qubit.
    pub fn reduced_a(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, k| {
            (0..2).map(|j| self.mat[(2 * i + j, 2 * k + j)]).sum()
        })
    }

    /// Reduced state of the second qubit.
    pub fn reduced_b(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |j, l| {
            (0..2).map(|i| self.mat[(2 * i + j, 2 * i + l)]).sum()
        })
    }
}

/// Transpose on the second qubit: `<ij|ρ^Γ|kl> = <il|ρ|kj>`.
pub fn partial_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(
        m.rows() == 4 && m.cols() == 4,
        "two-qubit operator expected"
    );
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (i, j, k, l) = (r / 2, r % 2, c / 2, c % 2);
        m[(2 * i + l, 2 * k + j)]
    })
}

/// Transpose on the first qubit.
pub fn partial_transpose_a(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(
        m.rows() == 4 && m.cols() == 4,
        "two-qubit operator expected"
    );
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (i, j, k, l) = (r / 2, r % 2, c / 2, c % 2);
        m[(2 * k + j, 2 * i + l)]
    })
}

/// Correlation matrix and local Bloch vectors of a two-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochDecomposition {
    /// `t[n][m] = Tr[ρ σ_n ⊗ σ_m]`.
    pub t: [[f64; 3]; 3],
    pub x: [f64; 3],
    pub y: [f64; 3],
}

impl BlochDecomposition {
    /// `(I⊗I + x·σ⊗I + I⊗y·σ + Σ T_nm σ_n⊗σ_m) / 4`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let mut acc = ComplexMatrix::identity(4);
        for a in Axis::ALL {
            let i = a.index();
            acc = &acc + &tensor(&pauli(a), &id).scale_real(self.x[i]);
            acc = &acc + &tensor(&id, &pauli(a)).scale_real(self.y[i]);
            for b in Axis::ALL {
                acc = &acc + &pauli_pair(a, b).scale_real(self.t[i][b.index()]);
            }
        }
        acc.scale_real(0.25)
    }

    /// `TᵀT`.
    pub fn ttt(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (m, row) in out.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.t[k][m] * self.t[k][n]).sum();
            }
        }
        out
    }
}

pub fn bloch_decompose(rho: &DensityMatrix) -> BlochDecomposition {
    let id = ComplexMatrix::identity(2);
    let mut out = BlochDecomposition {
        t: [[0.0; 3]; 3],
        x: [0.0; 3],
        y: [0.0; 3],
    };
    for a in Axis::ALL {
        let i = a.index();
        out.x[i] = rho.expectation(&tensor(&pauli(a), &id));
        out.y[i] = rho.expectation(&tensor(&id, &pauli(a)));
        for b in Axis::ALL {
            out.t[i][b.index()] = pauli_expectation(rho, a, b);
        }
    }
    out
}

/// `T_mn = Tr[ρ σ_m ⊗ σ_n]`.
pub fn pauli_expectation(rho: &DensityMatrix, m: Axis, n: Axis) -> f64 {
    rho.expectation(&pauli_pair(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[ZERO, C64::new(s, 0.0), C64::new(-s, 0.0), ZERO]).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        let mat = &singlet().matrix().scale_real(p)
            + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
        DensityMatrix::new(mat).unwrap()
    }

    #[test]
    fn singlet_bloch_is_isotropic() {
        let b = bloch_decompose(&singlet());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { -1.0 } else { 0.0 };
                assert!((b.t[i][j] - want).abs() < 1e-14);
            }
            assert!(b.x[i].abs() < 1e-15 && b.y[i].abs() < 1e-15);
        }
    }

    #[test]
    fn product_state_bloch() {
        let b = bloch_decompose(&DensityMatrix::basis(0, 0));
        assert_eq!(b.t[2][2], 1.0);
        assert_eq!(b.x, [0.0, 0.0, 1.0]);
        assert_eq!(b.y, [0.0, 0.0, 1.0]);
        assert_eq!(b.t[0][0], 0.0);
    }

    #[test]
    fn werner_bloch() {
        let b = bloch_decompose(&werner(0.9));
        for i in 0..3 {
            assert!((b.t[i][i] + 0.9).abs() < 1e-14);
        }
    }

    #[test]
    fn singlet_ttt_is_identity() {
        let ttt = bloch_decompose(&singlet()).ttt();
        let es = hermitian_eig(&ComplexMatrix::from_fn(3, 3, |i, j| {
            C64::new(ttt[i][j], 0.0)
        }))
        .unwrap();
        for v in es.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_examples() {
        let p00 = DensityMatrix::basis(0, 0);
        assert_eq!(p00.partial_transpose(), *p00.matrix());
        let min = hermitian_eig(&singlet().partial_transpose()).unwrap().min();
        assert!((min + 0.5).abs() < 1e-14);
        for p in [0.2, 0.5, 0.9] {
            let min = hermitian_eig(&werner(p).partial_transpose()).unwrap().min();
            assert!((min - (1.0 - 3.0 * p) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_expectations() {
        assert!((pauli_expectation(&singlet(), Axis::Z, Axis::Z) + 1.0).abs() < 1e-14);
        assert_eq!(
            pauli_expectation(&DensityMatrix::basis(0, 0), Axis::X, Axis::X),
            0.0
        );
    }

    #[test]
    fn validation_reports_failed_check() {
        let trace = ComplexMatrix::diag(&[0.9, 0.0, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::new(trace),
            Err(Error::InvalidState {
                check: StateCheck::Trace,
                ..
            })
        ));
        let psd = ComplexMatrix::diag(&[1.05, -0.05, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::new(psd),
            Err(Error::InvalidState {
                check: StateCheck::Psd,
                ..
            })
        ));
        let mut herm = ComplexMatrix::diag(&[0.25; 4]);
        herm[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(herm),
            Err(Error::InvalidState {
                check: StateCheck::Hermitian,
                ..
            })
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(2)),
            Err(Error::InvalidState {
                check: StateCheck::Dimension,
                ..
            })
        ));
    }

    #[test]
    fn reduced_states_of_singlet_are_mixed() {
        let s = singlet();
        let half = ComplexMatrix::diag(&[0.5, 0.5]);
        assert!(s.reduced_a().approx_eq(&half, 1e-15));
        assert!(s.reduced_b().approx_eq(&half, 1e-15));
    }

    #[test]
    fn reduced_states_of_product() {
        let rho = DensityMatrix::basis(0, 1);
        assert!(rho
            .reduced_a()
            .approx_eq(&ComplexMatrix::diag(&[1.0, 0.0]), 0.0));
        assert!(rho
            .reduced_b()
            .approx_eq(&ComplexMatrix::diag(&[0.0, 1.0]), 0.0));
    }
}
