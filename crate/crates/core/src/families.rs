//! State families: Werner, amplitude-damped, Bell-diagonal, the extremal
//! `ρ_min` / `ρ_max` curves and Hilbert-Schmidt random states.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::Serialize;

use crate::error::{check_range, domain, Result};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::DensityMatrix;
use crate::rng::{normal_pair, substream};

/// CHSH violation above which the REE-maximizing family switches to pure states.
pub const REE_CROSSOVER_B0: f64 = 0.81686;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Order used by Bell-diagonal weights.
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn vector(self) -> [C64; 4] {
        let s = FRAC_1_SQRT_2;
        let (z, p, m) = (C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0));
        match self {
            BellState::PhiPlus => [p, z, z, p],
            BellState::PhiMinus => [p, z, z, m],
            BellState::PsiPlus => [z, p, p, z],
            BellState::PsiMinus => [z, p, m, z],
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vector())
    }

    pub fn state(self) -> DensityMatrix {
        DensityMatrix::new(self.projector()).expect("Bell projector is a state")
    }
}

/// `|Ψ⁻⟩⟨Ψ⁻|`.
pub fn singlet() -> DensityMatrix {
    BellState::PsiMinus.state()
}

/// `p |Ψ⁻⟩⟨Ψ⁻| + (1 − p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0)?;
    let mat = &BellState::PsiMinus.projector().scale_real(p)
        + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(mat)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplitudeDampedParams {
    pub alpha: f64,
    pub p: f64,
}

impl AmplitudeDampedParams {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        check_range("alpha", alpha, 0.0, 1.0)?;
        check_range("p", p, 0.0, 1.0)?;
        Ok(Self { alpha, p })
    }

    /// `2p√(α(1−α))`, the concurrence and the xx/yy correlation of the state.
    pub fn coherence(&self) -> f64 {
        2.0 * self.p * (self.alpha * (1.0 - self.alpha)).sqrt()
    }
}

/// `p |ψ_α⟩⟨ψ_α| + (1 − p)|00⟩⟨00|` with `|ψ_α⟩ = √α|01⟩ + √(1−α)|10⟩`.
pub fn amplitude_damped(params: AmplitudeDampedParams) -> DensityMatrix {
    let AmplitudeDampedParams { alpha, p } = params;
    let a = alpha.sqrt();
    let b = (1.0 - alpha).sqrt();
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(1.0 - p, 0.0);
    m[(1, 1)] = C64::new(p * alpha, 0.0);
    m[(2, 2)] = C64::new(p * (1.0 - alpha), 0.0);
    m[(1, 2)] = C64::new(p * a * b, 0.0);
    m[(2, 1)] = C64::new(p * a * b, 0.0);
    DensityMatrix::new(m).expect("valid parameters give a state")
}

/// Amplitude-damped state at `α = 1/2`.
pub fn horodecki_state(p: f64) -> Result<DensityMatrix> {
    Ok(amplitude_damped(AmplitudeDampedParams::new(0.5, p)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellDiagonalParams {
    /// Weights of Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
    pub lambdas: [f64; 4],
}

impl BellDiagonalParams {
    pub fn new(lambdas: [f64; 4]) -> Result<Self> {
        if lambdas.iter().any(|l| !(*l >= 0.0)) {
            return Err(domain("Bell-diagonal weights must be nonnegative"));
        }
        let total: f64 = lambdas.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain(format!(
                "Bell-diagonal weights sum to {total}, not 1"
            )));
        }
        Ok(Self { lambdas })
    }

    /// Diagonal of `T` in the Pauli basis.
    pub fn correlations(&self) -> [f64; 3] {
        let [l1, l2, l3, l4] = self.lambdas;
        [l1 - l2 + l3 - l4, -l1 + l2 + l3 - l4, l1 + l2 - l3 - l4]
    }
}

pub fn bell_diagonal(params: BellDiagonalParams) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (w, bell) in params.lambdas.iter().zip(BellState::ALL) {
        m = &m + &bell.projector().scale_real(*w);
    }
    DensityMatrix::new(m).expect("simplex weights give a state")
}

/// `½[(1+B)|Φ⁺⟩⟨Φ⁺| + (1−B)|Φ⁻⟩⟨Φ⁻|]`, the lower-bound family.
pub fn rho_min(b: f64) -> Result<DensityMatrix> {
    check_range("B", b, 0.0, 1.0)?;
    let w = 0.5 * (1.0 + b);
    Ok(bell_diagonal(BellDiagonalParams::new([
        w,
        1.0 - w,
        0.0,
        0.0,
    ])?))
}

/// Parameters of the upper-bound family at violation `b`.
///
/// `b0 = 1` gives the negativity/concurrence maximizers, `b0 =`
/// [`REE_CROSSOVER_B0`] the REE maximizers, which become pure (`p = 1`)
/// from `b0` on.
pub fn rho_max_params(b: f64, b0: f64) -> Result<AmplitudeDampedParams> {
    check_range("B", b, 0.0, 1.0)?;
    check_range("B0", b0, 0.0, 1.0)?;
    if b0 >= 1.0 {
        let xi = (1.0 + b * b).sqrt();
        let p = (2.0 + SQRT_2 * xi) / 4.0;
        let ratio = 2.0 * xi * xi / (xi * xi + SQRT_2 * xi);
        let alpha = 0.5 * (1.0 - (1.0 - ratio * ratio).max(0.0).sqrt());
        return AmplitudeDampedParams::new(alpha.clamp(0.0, 1.0), p.min(1.0));
    }
    let p = if b < b0 {
        (2.0 + (2.0 + 2.0 * b * b).sqrt()) / 4.0
    } else {
        1.0
    };
    let radicand = (5.0 * p * p - 4.0 * p - b * b).max(0.0);
    let alpha = (p - radicand.sqrt()) / (2.0 * p);
    AmplitudeDampedParams::new(alpha.clamp(0.0, 1.0), p)
}

pub fn rho_max(b: f64, b0: f64) -> Result<DensityMatrix> {
    Ok(amplitude_damped(rho_max_params(b, b0)?))
}

/// Rank and stream layout of a random-state batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomStateSpec {
    pub rank: usize,
    pub seed: u64,
    pub count: usize,
}

impl RandomStateSpec {
    pub fn new(rank: usize, seed: u64, count: usize) -> Result<Self> {
        if !(1..=4).contains(&rank) {
            return Err(domain(format!("rank {rank} outside 1..=4")));
        }
        Ok(Self { rank, seed, count })
    }
}

/// Sample `index` of the stream: `GG†/Tr GG†` with `G` a 4×rank complex
/// Ginibre matrix. Rank 4 samples the Hilbert-Schmidt measure.
pub fn random_state_at(rank: usize, seed: u64, index: u64) -> DensityMatrix {
    assert!((1..=4).contains(&rank), "rank outside 1..=4");
    let mut rng = substream(seed, index);
    let mut g = ComplexMatrix::zeros(4, rank);
    for i in 0..4 {
        for j in 0..rank {
            let (re, im) = normal_pair(&mut rng);
            g[(i, j)] = C64::new(re, im);
        }
    }
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale_real(1.0 / tr).hermitian_part())
        .expect("normalized Wishart matrix is a state")
}

pub fn random_states(spec: RandomStateSpec) -> Vec<DensityMatrix> {
    (0..spec.count as u64)
        .map(|k| random_state_at(spec.rank, spec.seed, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{chsh_violation_b, concurrence, negativity};
    use crate::qcore::state::{pauli_expectation, Axis};

    #[test]
    fn werner_endpoints() {
        assert!(werner(1.0)
            .unwrap()
            .matrix()
            .approx_eq(singlet().matrix(), 1e-15));
        assert!(werner(0.0)
            .unwrap()
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed().matrix(), 1e-15));
        let w = werner(0.5).unwrap();
        assert!((negativity(&w) - 0.25).abs() < 1e-14);
        assert_eq!(chsh_violation_b(&w), 0.0);
        assert!(werner(1.1).is_err());
    }

    #[test]
    fn amplitude_damped_examples() {
        let bell = amplitude_damped(AmplitudeDampedParams::new(0.5, 1.0).unwrap());
        assert!((concurrence(&bell) - 1.0).abs() < 1e-12);
        for p in [0.3, 0.6, 0.9] {
            assert!((concurrence(&horodecki_state(p).unwrap()) - p).abs() < 1e-12);
        }
        let rho = amplitude_damped(AmplitudeDampedParams::new(0.2, 0.8).unwrap());
        assert!((concurrence(&rho) - 0.64).abs() < 1e-12);
        assert!((pauli_expectation(&rho, Axis::Z, Axis::Z) + 0.6).abs() < 1e-14);
        assert!(AmplitudeDampedParams::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn bell_diagonal_examples() {
        let phi = bell_diagonal(BellDiagonalParams::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!((negativity(&phi) - 1.0).abs() < 1e-14);
        assert!((concurrence(&phi) - 1.0).abs() < 1e-12);
        let mixed = bell_diagonal(BellDiagonalParams::new([0.25; 4]).unwrap());
        assert!(mixed
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed().matrix(), 1e-15));
        let n = 0.4725;
        let small = (1.0 - n) / 6.0;
        let x5 =
            bell_diagonal(BellDiagonalParams::new([small, small, small, (1.0 + n) / 2.0]).unwrap());
        assert!((negativity(&x5) - n).abs() < 1e-12);
        assert!((concurrence(&x5) - n).abs() < 1e-12);
        assert!(BellDiagonalParams::new([0.5, 0.5, 0.1, 0.0]).is_err());
    }

    #[test]
    fn rho_min_examples() {
        let top = rho_min(1.0).unwrap();
        assert!(top
            .matrix()
            .approx_eq(&BellState::PhiPlus.projector(), 1e-15));
        let half = rho_min(0.5).unwrap();
        assert!((negativity(&half) - 0.5).abs() < 1e-12);
        assert!((concurrence(&half) - 0.5).abs() < 1e-12);
        assert!((chsh_violation_b(&half) - 0.5).abs() < 1e-10);
        assert!(negativity(&rho_min(0.0).unwrap()) < 1e-15);
    }

    #[test]
    fn rho_max_examples() {
        let params = rho_max_params(0.0, 1.0).unwrap();
        assert!((params.p - 0.853553).abs() < 1e-6);
        assert!((params.alpha - 0.219951).abs() < 1e-6);
        let rho = amplitude_damped(params);
        assert!((concurrence(&rho) - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((negativity(&rho) - 0.57567).abs() < 1e-5);

        let top = rho_max_params(1.0, 1.0).unwrap();
        assert!((top.p - 1.0).abs() < 1e-15);
        assert!((top.alpha - 0.5).abs() < 1e-7);
        let bell = amplitude_damped(top);
        assert!((negativity(&bell) - 1.0).abs() < 1e-9);
        assert!((concurrence(&bell) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rho_max_hits_requested_violation() {
        for k in 1..=20 {
            let b = k as f64 / 20.0;
            for b0 in [1.0, REE_CROSSOVER_B0] {
                let rho = rho_max(b, b0).unwrap();
                assert!(
                    (chsh_violation_b(&rho) - b).abs() < 1e-9,
                    "B = {b}, B0 = {b0}"
                );
            }
        }
    }

    #[test]
    fn ree_family_is_pure_beyond_crossover() {
        assert_eq!(rho_max_params(0.9, REE_CROSSOVER_B0).unwrap().p, 1.0);
        assert!(rho_max_params(0.5, REE_CROSSOVER_B0).unwrap().p < 1.0);
    }

    #[test]
    fn random_states_reproducible() {
        let spec = RandomStateSpec::new(4, 11, 5).unwrap();
        assert_eq!(random_states(spec), random_states(spec));
        assert_eq!(random_states(spec)[3], random_state_at(4, 11, 3));
        assert!(RandomStateSpec::new(5, 0, 1).is_err());
    }

    #[test]
    fn rank_one_samples_are_pure() {
        for rho in random_states(RandomStateSpec::new(1, 3, 50).unwrap()) {
            assert!((rho.purity() - 1.0).abs() < 1e-10);
        }
    }
}
