use std::f64::consts::FRAC_1_SQRT_2;

use chshent::error::Error;
use chshent::extremal::{
    c_max, c_of_n_upper_b0, kkt_check, lower_bounds, n1, n_max, plateau_alpha_range, plateau_state,
    uniform_grid, vw_check,
};
use chshent::families::{random_state_at, rho_max, rho_max_params, rho_min};
use chshent::measures::{chsh_violation_b, concurrence, horodecki_m, negativity, ree};
use proptest::prelude::*;
use rayon::prelude::*;

const ENVELOPE_TOL: f64 = 1e-9;

#[test]
fn random_states_stay_inside_the_envelope() {
    let violations: usize = (0..100_000u64)
        .into_par_iter()
        .filter(|&k| {
            let rho = random_state_at(4, 2013, k);
            let (b, n, c) = (chsh_violation_b(&rho), negativity(&rho), concurrence(&rho));
            let inside = b <= n + ENVELOPE_TOL
                && n <= n_max(b).unwrap() + ENVELOPE_TOL
                && b <= c + ENVELOPE_TOL
                && c <= c_max(b).unwrap() + ENVELOPE_TOL;
            !inside
        })
        .count();
    assert_eq!(violations, 0);
}

#[test]
fn numeric_ree_respects_the_lower_bound() {
    (0..1000u64).into_par_iter().for_each(|k| {
        let rho = random_state_at(4, 2013, 100 * k);
        let bound = lower_bounds(chsh_violation_b(&rho)).unwrap().e_r_min;
        let e_r = ree(&rho, 1e-8).unwrap().e_r;
        assert!(e_r >= bound - ENVELOPE_TOL, "state {k}: {e_r} < {bound}");
    });
}

#[test]
fn extremal_families_attain_the_bounds() {
    for b in uniform_grid(21) {
        let top = rho_max(b, 1.0).unwrap();
        assert!(
            (negativity(&top) - n_max(b).unwrap()).abs() < 1e-9,
            "B = {b}"
        );
        assert!(
            (concurrence(&top) - c_max(b).unwrap()).abs() < 1e-9,
            "B = {b}"
        );
        let bottom = rho_min(b).unwrap();
        let lower = lower_bounds(b).unwrap();
        assert!((negativity(&bottom) - lower.n_min).abs() < 1e-9);
        assert!((concurrence(&bottom) - lower.c_min).abs() < 1e-9);
    }
}

#[test]
fn upper_boundary_is_continuous_at_n1() {
    let at = c_of_n_upper_b0(n1()).unwrap();
    assert!((at - FRAC_1_SQRT_2).abs() < 1e-12);
    let below = c_of_n_upper_b0(n1() - 1e-9).unwrap();
    assert!((below - at).abs() < 1e-8);
}

proptest! {
    #[test]
    fn plateau_has_unit_m(t in 0.0f64..=1.0) {
        let (lo, hi) = plateau_alpha_range();
        let rho = plateau_state(lo + t * (hi - lo)).unwrap();
        prop_assert!((horodecki_m(&rho) - 1.0).abs() < 1e-10);
        prop_assert!((concurrence(&rho) - FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn vw_saturation(b in 0.0f64..=1.0) {
        let r = vw_check(b).unwrap();
        prop_assert!(r.cond1);
        prop_assert!(r.saturation2.abs() < 1e-12);
        prop_assert!(r.saturation3.abs() < 1e-12);
        prop_assert!((r.a_plus - 1.0).abs() < 1e-12);
    }
}

#[test]
fn kkt_on_the_grid() {
    for b in uniform_grid(11) {
        let params = rho_max_params(b, 1.0).unwrap();
        match kkt_check(params, 1e-8) {
            Ok(report) => assert!(report.pass, "B = {b}: {report:?}"),
            Err(Error::UndefinedGradient(_)) => assert_eq!(b, 0.0),
            Err(e) => panic!("B = {b}: {e}"),
        }
    }
}
