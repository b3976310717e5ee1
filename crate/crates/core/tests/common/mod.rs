#![allow(dead_code)]

use chshent::families::random_state_at;
use chshent::qcore::{bloch_decompose, ComplexMatrix, DensityMatrix, C64};
use chshent::rng::{normal_pair, substream};
use chshent::twocopy::{estimate_ttt, sample_schedule, Estimator, RegimeWeights};

/// Haar-like unitary: Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary(dim: usize, seed: u64, index: u64) -> ComplexMatrix {
    let mut rng = substream(seed ^ 0x5eed_u64, index);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| {
                let (re, im) = normal_pair(&mut rng);
                C64::new(re, im)
            })
            .collect();
        for u in &cols {
            let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64, index: u64) -> ComplexMatrix {
    let mut rng = substream(seed ^ 0x4e7_u64, index);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let (re, im) = normal_pair(&mut rng);
        C64::new(re, im)
    });
    g.hermitian_part()
}

/// Singlet, Werner(0.9), |00⟩ and 20 Hilbert-Schmidt states.
pub fn estimator_states() -> Vec<DensityMatrix> {
    let mut states = vec![
        chshent::families::singlet(),
        chshent::families::werner(0.9).unwrap(),
        DensityMatrix::basis(0, 0),
    ];
    states.extend((0..20).map(|k| random_state_at(4, 2024, k)));
    states
}

fn frobenius(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += (a[i][j] - b[i][j]).powi(2);
        }
    }
    acc.sqrt()
}

/// Least-squares slope of `ln(rms error)` against `ln(shots)` for the
/// regime-normalized estimate of one state, shots from 10² to 10⁶ in
/// half-decade steps, `repeats` seeds per point.
pub fn error_slope(rho: &DensityMatrix, repeats: u64) -> f64 {
    let exact = bloch_decompose(rho).ttt();
    let points: Vec<(f64, f64)> = (0..=8)
        .map(|k| {
            let shots = (100.0 * 10f64.powf(k as f64 / 2.0)).round() as usize;
            let mean_sq = (0..repeats)
                .map(|seed| {
                    let streams =
                        sample_schedule(rho, shots, RegimeWeights::default(), 1000 + seed).unwrap();
                    let est = estimate_ttt(&streams, Estimator::RegimeNormalized).unwrap();
                    frobenius(&est.matrix, &exact).powi(2)
                })
                .sum::<f64>()
                / repeats as f64;
            ((shots as f64).ln(), 0.5 * mean_sq.ln())
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Relative entropy between Bell-diagonal states, in bits.
fn classical_relative_entropy(lambda: &[f64; 4], mu: &[f64; 4]) -> f64 {
    lambda
        .iter()
        .zip(mu)
        .map(|(&l, &m)| if l > 0.0 { l * (l / m).log2() } else { 0.0 })
        .sum()
}

/// Zooming grid search over Bell-diagonal PPT states (all weights ≤ 1/2).
pub fn bell_diagonal_grid_ree(lambda: [f64; 4]) -> f64 {
    let feasible = |mu: &[f64; 4]| mu.iter().all(|&m| m > 0.0 && m <= 0.5);
    let mut center = [0.25, 0.25, 0.25];
    let mut width = 0.5;
    let mut best = f64::INFINITY;
    let steps = 24;
    for _ in 0..40 {
        let mut best_here = center;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let offs = |n: usize| width * (n as f64 / steps as f64 - 0.5);
                    let (a, b, c) = (
                        center[0] + offs(i),
                        center[1] + offs(j),
                        center[2] + offs(k),
                    );
                    let mu = [a, b, c, 1.0 - a - b - c];
                    if !feasible(&mu) {
                        continue;
                    }
                    let v = classical_relative_entropy(&lambda, &mu);
                    if v < best {
                        best = v;
                        best_here = [a, b, c];
                    }
                }
            }
        }
        center = best_here;
        width *= 0.5;
    }
    best
}
