use std::f64::consts::FRAC_1_SQRT_2;

use chshent::extremal::uniform_grid;
use chshent::families::{
    amplitude_damped, bell_diagonal, random_states, rho_max_params, werner, BellDiagonalParams,
    BellState, RandomStateSpec,
};
use chshent::measures::{chsh_violation_b, concurrence, horodecki_m, negativity, ree};
use chshent::qcore::DensityMatrix;
use chshent::rng::{substream, uniform};
use proptest::prelude::*;

#[test]
fn werner_thresholds() {
    let probe = 1e-6;
    let n_edge = 1.0 / 3.0;
    assert_eq!(negativity(&werner(n_edge - probe).unwrap()), 0.0);
    assert!(negativity(&werner(n_edge + probe).unwrap()) > 0.0);
    assert_eq!(
        chsh_violation_b(&werner(FRAC_1_SQRT_2 - probe).unwrap()),
        0.0
    );
    assert!(chsh_violation_b(&werner(FRAC_1_SQRT_2 + probe).unwrap()) > 0.0);
}

#[test]
fn upper_family_concurrence_is_the_coherence() {
    for b in uniform_grid(21) {
        let params = rho_max_params(b, 1.0).unwrap();
        let c = concurrence(&amplitude_damped(params));
        assert!((c - params.coherence()).abs() < 1e-12, "B = {b}");
    }
}

#[test]
fn bell_diagonal_m_from_correlations() {
    let mut rng = substream(77, 0);
    for _ in 0..1000 {
        // uniform on the simplex via sorted spacings
        let mut cuts = [uniform(&mut rng), uniform(&mut rng), uniform(&mut rng)];
        cuts.sort_by(f64::total_cmp);
        let w = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
        let params = BellDiagonalParams::new(w).unwrap();
        let mut sq: Vec<f64> = params.correlations().iter().map(|t| t * t).collect();
        sq.sort_by(f64::total_cmp);
        let m = sq[1] + sq[2];
        assert!((horodecki_m(&bell_diagonal(params)) - m).abs() < 1e-12);
    }
}

#[test]
fn random_streams_are_bit_reproducible() {
    let spec = RandomStateSpec::new(3, 99, 50).unwrap();
    let a = random_states(spec);
    let b = random_states(spec);
    assert_eq!(a, b);
    let longer = random_states(RandomStateSpec::new(3, 99, 80).unwrap());
    assert_eq!(&longer[..50], &a[..]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any two Bell states give the lower family the same measures.
    #[test]
    fn bell_pair_choice_is_immaterial(b in 0.0f64..=1.0, first in 0usize..4, offset in 1usize..4) {
        let second = (first + offset) % 4;
        let w = 0.5 * (1.0 + b);
        let build = |i: usize, j: usize| {
            let (bi, bj) = (BellState::ALL[i], BellState::ALL[j]);
            let m = &bi.projector().scale_real(w) + &bj.projector().scale_real(1.0 - w);
            DensityMatrix::new(m).unwrap()
        };
        let reference = build(0, 1);
        let other = build(first, second);
        prop_assert!((chsh_violation_b(&reference) - chsh_violation_b(&other)).abs() < 1e-12);
        prop_assert!((negativity(&reference) - negativity(&other)).abs() < 1e-12);
        prop_assert!((concurrence(&reference) - concurrence(&other)).abs() < 1e-12);
    }
}

#[test]
fn bell_pair_choice_leaves_ree_unchanged() {
    let w = 0.8;
    let a = DensityMatrix::new(
        &BellState::PhiPlus.projector().scale_real(w)
            + &BellState::PhiMinus.projector().scale_real(1.0 - w),
    )
    .unwrap();
    let b = DensityMatrix::new(
        &BellState::PsiPlus.projector().scale_real(w)
            + &BellState::PsiMinus.projector().scale_real(1.0 - w),
    )
    .unwrap();
    let (ea, eb) = (ree(&a, 1e-9).unwrap().e_r, ree(&b, 1e-9).unwrap().e_r);
    assert!((ea - eb).abs() < 1e-6, "{ea} vs {eb}");
}
