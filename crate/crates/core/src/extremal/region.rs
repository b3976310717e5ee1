//! Geometry of the concurrence-negativity region for states that do not
//! violate CHSH (`B = 0`): the upper boundary, the landmark points X₁…X₅
//! with witness states, and pairs of states the two measures order
//! differently.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::Serialize;

use crate::error::{check_range, domain, Result};
use crate::families::{
    amplitude_damped, bell_diagonal, rho_max_params, AmplitudeDampedParams, BellDiagonalParams,
};
use crate::measures::{chsh_violation_b, concurrence, negativity};
use crate::qcore::state::DensityMatrix;

/// Where the Horodecki curve meets the `C = 1/√2` plateau.
pub fn n1() -> f64 {
    FRAC_1_SQRT_2 + (2.0 - SQRT_2).sqrt() - 1.0
}

/// Right end of the plateau: the largest negativity with `B = 0`.
pub fn n2() -> f64 {
    (SQRT_2 + (14.0 - 4.0 * SQRT_2).sqrt() - 2.0) / 4.0
}

/// Rank-3 Bell-diagonal state on the `C = N` lower boundary with `B = 0`.
pub fn n3() -> f64 {
    SQRT_2 - 1.0
}

/// Rank-4 Bell-diagonal state on the `C = N` lower boundary with `B = 0`.
pub fn n4() -> f64 {
    (3.0 * SQRT_2 - 2.0) / 4.0
}

/// Upper boundary `C(N)` of the `B = 0` region for `N ∈ [0, N₂]`.
pub fn c_of_n_upper_b0(n: f64) -> Result<f64> {
    check_range("N", n, 0.0, n2())?;
    if n <= n1() {
        Ok((2.0 * n * (n + 1.0)).sqrt() - n)
    } else {
        Ok(FRAC_1_SQRT_2)
    }
}

/// Lower boundary of the `B = 0` region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerBoundary {
    /// `C = N`, reached by rank-4 Bell-diagonal states.
    Attained { c: f64 },
    /// `N ∈ (N₄, N₂]`: no analytic extremal state is known.
    EmpiricallyOpen,
}

pub fn lower_boundary_b0(n: f64) -> Result<LowerBoundary> {
    check_range("N", n, 0.0, n2())?;
    Ok(if n <= n4() {
        LowerBoundary::Attained { c: n }
    } else {
        LowerBoundary::EmpiricallyOpen
    })
}

/// `α` interval of the plateau family, `(1 ± √(8√2 − 11))/2`.
pub fn plateau_alpha_range() -> (f64, f64) {
    let half_width = (8.0 * SQRT_2 - 11.0).sqrt() / 2.0;
    (0.5 - half_width, 0.5 + half_width)
}

/// Parameters `(α, p = 1/(2√(2α(1−α))))` of the plateau family.
pub fn plateau_params(alpha: f64) -> Result<AmplitudeDampedParams> {
    let (lo, hi) = plateau_alpha_range();
    check_range("alpha", alpha, lo, hi)?;
    let p = 1.0 / (2.0 * (2.0 * alpha * (1.0 - alpha)).sqrt());
    AmplitudeDampedParams::new(alpha, p.min(1.0))
}

/// Plateau state: `C = 1/√2` and `M = 1` for every `α` in the range.
pub fn plateau_state(alpha: f64) -> Result<DensityMatrix> {
    Ok(amplitude_damped(plateau_params(alpha)?))
}

/// Steps `x` down one ulp at a time until the state no longer violates CHSH
/// at all. States built exactly on `M = 1` land a rounding error either side.
/// Steps `x` down one ulp at a time until `build(x)` has `B == 0` exactly.
///
/// Families built on `M = 1` land a rounding error above it, and the square
/// root in `B` turns that into `B ~ 1e-8`.
pub fn onto_zero_violation(
    mut x: f64,
    build: impl Fn(f64) -> Result<DensityMatrix>,
) -> Result<DensityMatrix> {
    for _ in 0..256 {
        let rho = build(x)?;
        if chsh_violation_b(&rho) == 0.0 {
            return Ok(rho);
        }
        x = x.next_down();
    }
    Err(domain("could not reach B = 0 by rounding steps"))
}

/// Bell-diagonal `λ₁ = 0, λ₂ = λ₃ = (1−N)/4, λ₄ = (1+N)/2`.
fn rank3_bell_diagonal(n: f64) -> Result<DensityMatrix> {
    let small = (1.0 - n) / 4.0;
    Ok(bell_diagonal(BellDiagonalParams::new([
        0.0,
        small,
        small,
        1.0 - 2.0 * small,
    ])?))
}

/// Bell-diagonal `λ₁ = λ₂ = λ₃ = (1−N)/6, λ₄ = (1+N)/2`.
fn rank4_bell_diagonal(n: f64) -> Result<DensityMatrix> {
    let small = (1.0 - n) / 6.0;
    Ok(bell_diagonal(BellDiagonalParams::new([
        small,
        small,
        small,
        1.0 - 3.0 * small,
    ])?))
}

/// A marked point of the region with its witness state.
#[derive(Clone, Debug, Serialize)]
pub struct Landmark {
    pub label: &'static str,
    pub n_expected: f64,
    pub c_expected: f64,
    pub n: f64,
    pub c: f64,
    pub b: f64,
    #[serde(skip)]
    pub state: DensityMatrix,
}

impl Landmark {
    fn new(label: &'static str, expected: (f64, f64), state: DensityMatrix) -> Self {
        Landmark {
            label,
            n_expected: expected.0,
            c_expected: expected.1,
            n: negativity(&state),
            c: concurrence(&state),
            b: chsh_violation_b(&state),
            state,
        }
    }

    /// Largest deviation of the computed `(N, C)` from the expected point.
    pub fn deviation(&self) -> f64 {
        (self.n - self.n_expected)
            .abs()
            .max((self.c - self.c_expected).abs())
    }
}

/// X₁ … X₅ in order.
pub fn region_landmarks() -> Result<Vec<Landmark>> {
    let x1 = onto_zero_violation(FRAC_1_SQRT_2, |p| {
        Ok(amplitude_damped(AmplitudeDampedParams::new(0.5, p)?))
    })?;
    let x2_params = rho_max_params(0.0, 1.0)?;
    let x2 = onto_zero_violation(x2_params.p, |p| {
        Ok(amplitude_damped(AmplitudeDampedParams::new(
            x2_params.alpha,
            p,
        )?))
    })?;
    let x3 = onto_zero_violation(n3(), rank3_bell_diagonal)?;
    let x4 = onto_zero_violation(n4(), rank4_bell_diagonal)?;
    let x5 = rank4_bell_diagonal(n1())?;
    Ok(vec![
        Landmark::new("X1", (n1(), FRAC_1_SQRT_2), x1),
        Landmark::new("X2", (n2(), FRAC_1_SQRT_2), x2),
        Landmark::new("X3", (n3(), n3()), x3),
        Landmark::new("X4", (n4(), n4()), x4),
        Landmark::new("X5", (n1(), n1()), x5),
    ])
}

/// `q ρ_X₂ + (1 − q) ρ_X₄`.
pub fn mixture_rho_q(q: f64) -> Result<DensityMatrix> {
    check_range("q", q, 0.0, 1.0)?;
    let marks = region_landmarks()?;
    DensityMatrix::mixture(&[(q, &marks[1].state), (1.0 - q, &marks[3].state)])
}

/// How the two measures compare a pair of states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingPattern {
    /// `N₁ < N₂` but `C₁ > C₂`.
    Reversed,
    /// `N₁ = N₂` but `C₁ > C₂`.
    EqualNegativity,
    /// `N₁ < N₂` but `C₁ = C₂`.
    EqualConcurrence,
    /// `N₁ > N₂` and `C₁ > C₂`.
    SameOrder,
}

/// Tolerance for the "equal" side of a pattern.
pub const ORDERING_EQUAL_TOL: f64 = 1e-9;
/// Minimum gap for the strict side of a pattern.
pub const ORDERING_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct OrderingPair {
    pub first: Landmark,
    pub second: Landmark,
    pub pattern: OrderingPattern,
    /// Smallest strict gap in the pattern.
    pub margin: f64,
    pub holds: bool,
}

impl OrderingPair {
    fn new(first: Landmark, second: Landmark, pattern: OrderingPattern) -> Self {
        let dn = second.n - first.n;
        let dc = first.c - second.c;
        let both_b_zero = first.b <= ORDERING_EQUAL_TOL && second.b <= ORDERING_EQUAL_TOL;
        let (margin, equal_ok) = match pattern {
            OrderingPattern::Reversed => (dn.min(dc), true),
            OrderingPattern::EqualNegativity => (dc, dn.abs() <= ORDERING_EQUAL_TOL),
            OrderingPattern::EqualConcurrence => (dn, dc.abs() <= ORDERING_EQUAL_TOL),
            OrderingPattern::SameOrder => ((-dn).min(dc), true),
        };
        OrderingPair {
            first,
            second,
            pattern,
            margin,
            holds: both_b_zero && equal_ok && margin > ORDERING_MARGIN,
        }
    }
}

/// (X₁, X₄), (X₁, X₅) and (X₁, X₂): pairs with `B = 0` that negativity and
/// concurrence order differently.
pub fn ordering_counterexamples() -> Result<Vec<OrderingPair>> {
    let marks = region_landmarks()?;
    let pick = |i: usize| marks[i].clone();
    Ok(vec![
        OrderingPair::new(pick(0), pick(3), OrderingPattern::Reversed),
        OrderingPair::new(pick(0), pick(4), OrderingPattern::EqualNegativity),
        OrderingPair::new(pick(0), pick(1), OrderingPattern::EqualConcurrence),
    ])
}

/// (X₂, X₄): ordered the same way by both measures.
pub fn ordering_control_pair() -> Result<OrderingPair> {
    let marks = region_landmarks()?;
    Ok(OrderingPair::new(
        marks[1].clone(),
        marks[3].clone(),
        OrderingPattern::SameOrder,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landmark_constants() {
        assert!((n1() - 0.4725).abs() < 1e-4);
        assert!((n2() - 0.5757).abs() < 1e-4);
        assert!((n3() - 0.414214).abs() < 1e-6);
        assert!((n4() - 0.560660).abs() < 1e-6);
        assert!((n2() - crate::extremal::n_max(0.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn upper_boundary() {
        assert_eq!(c_of_n_upper_b0(0.0).unwrap(), 0.0);
        assert!((c_of_n_upper_b0(0.3).unwrap() - 0.583176).abs() < 1e-6);
        let n = n1();
        let curve = (2.0 * n * (n + 1.0)).sqrt() - n;
        assert!((curve - FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(c_of_n_upper_b0(0.5).unwrap(), FRAC_1_SQRT_2);
        assert!(c_of_n_upper_b0(0.6).is_err());
    }

    #[test]
    fn lower_boundary() {
        assert_eq!(
            lower_boundary_b0(0.3).unwrap(),
            LowerBoundary::Attained { c: 0.3 }
        );
        assert_eq!(
            lower_boundary_b0(0.57).unwrap(),
            LowerBoundary::EmpiricallyOpen
        );
        assert!(lower_boundary_b0(0.58).is_err());
    }

    #[test]
    fn plateau_has_unit_m_and_fixed_concurrence() {
        let (lo, hi) = plateau_alpha_range();
        assert!((lo - 0.219951).abs() < 1e-6);
        for k in 0..=10 {
            let alpha = lo + (hi - lo) * k as f64 / 10.0;
            let rho = plateau_state(alpha).unwrap();
            assert!((crate::measures::horodecki_m(&rho) - 1.0).abs() < 1e-10);
            assert!((concurrence(&rho) - FRAC_1_SQRT_2).abs() < 1e-10);
        }
        assert!(plateau_state(0.1).is_err());
    }

    #[test]
    fn plateau_end_is_x2() {
        let (lo, _) = plateau_alpha_range();
        let end = plateau_state(lo).unwrap();
        let x2 = crate::families::rho_max(0.0, 1.0).unwrap();
        assert!(end.matrix().approx_eq(x2.matrix(), 1e-12));
    }

    #[test]
    fn landmarks_sit_at_zero_violation() {
        for mark in region_landmarks().unwrap() {
            assert_eq!(mark.b, 0.0, "{}", mark.label);
            assert!(
                mark.deviation() < 1e-9,
                "{}: {}",
                mark.label,
                mark.deviation()
            );
        }
    }

    #[test]
    fn mixture_endpoints() {
        let marks = region_landmarks().unwrap();
        let at_one = mixture_rho_q(1.0).unwrap();
        assert!((negativity(&at_one) - marks[1].n).abs() < 1e-12);
        let at_zero = mixture_rho_q(0.0).unwrap();
        assert!((negativity(&at_zero) - n4()).abs() < 1e-9);
        assert!((concurrence(&at_zero) - n4()).abs() < 1e-9);
        assert!(mixture_rho_q(1.1).is_err());
    }

    #[test]
    fn counterexamples_hold() {
        for pair in ordering_counterexamples().unwrap() {
            assert!(pair.holds, "{:?} margin {}", pair.pattern, pair.margin);
        }
        let control = ordering_control_pair().unwrap();
        assert!(control.holds);
    }
}
