//! Hermitian eigensolver for the small fixed sizes that show up here.
//!
//! 2x2 blocks use the closed form. Everything larger goes through cyclic
//! complex Jacobi rotations: each rotation first removes the phase of the
//! pivot `a_pq` and then applies the classical real rotation, so the
//! iteration is the textbook symmetric Jacobi method in a rotated frame.

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Maximum Hermiticity residual accepted by [`hermitian_eig`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;
/// Off-diagonal Frobenius norm at which Jacobi sweeps stop (scaled by `max(1, ‖H‖_F)`).
pub const JACOBI_OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Output is deterministic for identical input. Each eigenvector's phase is
/// fixed so that its largest-magnitude component is real and positive.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", h.rows(), h.cols()),
        });
    }
    let residual = h.hermiticity_residual();
    if !(residual <= HERMITIAN_INPUT_TOL) {
        return Err(Error::NonHermitianInput(residual));
    }
    let a = h.hermitian_part();
    let (values, vectors) = match a.rows() {
        1 => (vec![a[(0, 0)].re], ComplexMatrix::identity(1)),
        2 => eig2(&a),
        _ => jacobi(a)?,
    };
    Ok(sorted(values, vectors))
}

/// Real symmetric 3x3 eigenproblem, ascending, eigenvectors as rows of the
/// returned array.
pub fn symmetric_eig3(a: &[[f64; 3]; 3]) -> Result<([f64; 3], [[f64; 3]; 3])> {
    let m = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(a[i][j], 0.0));
    let es = hermitian_eig(&m)?;
    let mut vals = [0.0; 3];
    let mut vecs = [[0.0; 3]; 3];
    for k in 0..3 {
        vals[k] = es.values[k];
        for i in 0..3 {
            // real input keeps every rotation phase at +-1
            vecs[k][i] = es.vectors[(i, k)].re;
        }
    }
    Ok((vals, vecs))
}

fn eig2(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (p, d) = (a[(0, 0)].re, a[(1, 1)].re);
    let b = a[(0, 1)];
    let mean = 0.5 * (p + d);
    let half_gap = 0.5 * (p - d);
    let radius = half_gap.hypot(b.norm());
    let (lo, hi) = (mean - radius, mean + radius);
    if b.norm() == 0.0 {
        // already diagonal
        return (vec![p, d], ComplexMatrix::identity(2));
    }
    // Two candidate eigenvectors for `hi`; keep the better conditioned one.
    let c1 = [b, C64::new(hi - p, 0.0)];
    let c2 = [C64::new(hi - d, 0.0), b.conj()];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let (v, n) = if n1 >= n2 {
        (c1, n1.sqrt())
    } else {
        (c2, n2.sqrt())
    };
    let vhi = [v[0] / n, v[1] / n];
    let vlo = [-vhi[1].conj(), vhi[0].conj()];
    let vectors =
        ComplexMatrix::from_vec(2, 2, vec![vlo[0], vhi[0], vlo[1], vhi[1]]).expect("2x2 layout");
    (vec![lo, hi], vectors)
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_norm(&a) >= threshold {
        return Err(Error::EigenNoConvergence(MAX_SWEEPS));
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok((values, v))
}

/// One rotation annihilating `a[p][q]`.
///
/// With `a_pq = m e^{iφ}` the unitary is `J = diag(1, e^{-iφ}) · R(θ)` acting on
/// the (p, q) plane, which reduces the pivot block to a real symmetric one.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let m = apq.norm();
    if m == 0.0 {
        return;
    }
    let phase = apq / m;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * m);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_minus = phase.conj();
    let n = a.rows();

    // A <- A J (columns p, q)
    for i in 0..n {
        let (aip, aiq) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = aip * c - aiq * e_minus * s;
        a[(i, q)] = aip * s + aiq * e_minus * c;
    }
    // A <- J† A (rows p, q)
    for j in 0..n {
        let (apj, aqj) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = apj * c - aqj * phase * s;
        a[(q, j)] = apj * s + aqj * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * m, 0.0);
    a[(q, q)] = C64::new(aqq + t * m, 0.0);

    // V <- V J
    for i in 0..n {
        let (vip, viq) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = vip * c - viq * e_minus * s;
        v[(i, q)] = vip * s + viq * e_minus * c;
    }
}

fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> EigenSystem {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut out = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        // fix the gauge: largest component real positive
        let mut pivot = 0;
        for i in 0..n {
            if vectors[(i, k)].norm() > vectors[(pivot, k)].norm() + 1e-14 {
                pivot = i;
            }
        }
        let z = vectors[(pivot, k)];
        let gauge = if z.norm() > 0.0 {
            z.conj() / z.norm()
        } else {
            ONE
        };
        for i in 0..n {
            out[(i, col)] = vectors[(i, k)] * gauge;
        }
    }
    EigenSystem {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: out,
    }
}
