mod common;

use chshent::families::random_state_at;
use chshent::measures::chsh_violation_b;
use chshent::qcore::{bloch_decompose, DensityMatrix};
use chshent::twocopy::{
    b_from_exact, b_from_ttt, estimate_ttt, event_probabilities, sample_schedule, sample_shots,
    ttt_expectation, Estimator, LeftOutcome, RegimeWeights, SCHEDULE,
};
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn two_copy_identity_on_random_states() {
    for k in 0..1000 {
        let rho = random_state_at(1 + (k % 4) as usize, 606, k);
        let ttt = bloch_decompose(&rho).ttt();
        for s in SCHEDULE {
            let got = ttt_expectation(&rho, s);
            assert!(
                (got - ttt[s.m.index()][s.n.index()]).abs() < 1e-10,
                "state {k}, {s}"
            );
        }
    }
}

#[test]
fn exact_b_matches_the_direct_value() {
    for k in 0..1000 {
        let rho = random_state_at(1 + (k % 4) as usize, 607, k);
        let est = b_from_exact(&bloch_decompose(&rho).ttt()).unwrap();
        assert!((est.b - chsh_violation_b(&rho)).abs() < 1e-12, "state {k}");
    }
}

#[test]
fn error_falls_as_inverse_square_root() {
    let slopes: Vec<f64> = common::estimator_states()
        .par_iter()
        .map(|rho| common::error_slope(rho, 3))
        .collect();
    for (k, slope) in slopes.iter().enumerate() {
        assert!((-0.6..=-0.4).contains(slope), "state {k}: slope {slope}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Cross events in the overlap regime occur at the singlet weight of the
    /// two A photons.
    #[test]
    fn anti_bunching_rate(index in 0u64..10_000, setting in 0usize..6) {
        let rho = random_state_at(4, 608, index);
        let s = SCHEDULE[setting];
        let shots = 40_000;
        let only = RegimeWeights::new(1.0, 0.0).unwrap();
        let stream = sample_shots(&rho, s, shots, only, index).unwrap();
        let rate = event_probabilities(&rho, s).cross_rate();
        let seen = stream.shots.iter().filter(|r| r.left == LeftOutcome::Cross).count() as f64
            / shots as f64;
        let se = (rate * (1.0 - rate) / shots as f64).sqrt();
        prop_assert!((seen - rate).abs() <= 5.0 * se + 1e-12, "{seen} vs {rate}");
    }
}

#[test]
fn both_estimators_recover_b() {
    let cases = [
        (chshent::families::singlet(), 1.0),
        (chshent::families::werner(0.9).unwrap(), 0.787401),
        (DensityMatrix::basis(0, 0), 0.0),
    ];
    for (rho, want) in cases {
        let streams = sample_schedule(&rho, 300_000, RegimeWeights::default(), 9).unwrap();
        for estimator in [Estimator::RegimeNormalized, Estimator::PooledK0] {
            let est = b_from_ttt(&estimate_ttt(&streams, estimator).unwrap()).unwrap();
            assert!(
                (est.b - want).abs() <= 5.0 * est.b_std_err,
                "{estimator:?}: {} +- {} vs {want}",
                est.b,
                est.b_std_err
            );
        }
    }
}

#[test]
fn pooled_estimator_needs_the_one_to_two_split() {
    let rho = chshent::families::singlet();
    let even = RegimeWeights::new(0.5, 0.5).unwrap();
    let streams = sample_schedule(&rho, 100_000, even, 3).unwrap();
    let pooled = estimate_ttt(&streams, Estimator::PooledK0).unwrap();
    let regime = estimate_ttt(&streams, Estimator::RegimeNormalized).unwrap();
    for i in 0..3 {
        assert!((pooled.matrix[i][i] - 1.0).abs() > 10.0 * pooled.std_err[i][i]);
        assert!((regime.matrix[i][i] - 1.0).abs() <= 5.0 * regime.std_err[i][i]);
    }
}
