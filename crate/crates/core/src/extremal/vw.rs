//! Verstraete-Wolf optimality parameters of the maximal-concurrence family.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{check_range, Result};

/// `z` reaches −1 exactly at `B = 1`; allow for rounding there.
const Z_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VwReport {
    pub a_plus: f64,
    pub a_minus: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `−1 ≤ z ≤ 1`.
    pub cond1: bool,
    /// `(1+z)² − (a⁺+a⁻)²`, to be compared with `rhs2 = (x−y)²`.
    pub lhs2: f64,
    pub rhs2: f64,
    /// `(1−z)² − (a⁺−a⁻)²`, to be compared with `rhs3 = (x+y)²`.
    pub lhs3: f64,
    pub rhs3: f64,
    /// Residual of the identity `(1+z)² = (a⁺+a⁻)²`.
    pub saturation2: f64,
    /// Residual of the identity `(1−z)² = (a⁺−a⁻)²`.
    pub saturation3: f64,
}

/// Evaluates the parameters at violation `b` with `ξ = √(1 + b²)`.
///
/// The second and third conditions saturate on the left (`lhs = 0`). With
/// `x = y = ξ/√2` the third right side is `2ξ²`, so that condition as
/// written does not hold; both sides are reported as they are.
pub fn vw_check(b: f64) -> Result<VwReport> {
    check_range("B", b, 0.0, 1.0)?;
    let xi = (1.0 + b * b).sqrt();
    let offset = -SQRT_2 * (xi * xi - 2.0) / (4.0 * (xi + SQRT_2));
    let spread = SQRT_2 / 4.0 * (xi * xi + 2.0 * SQRT_2 * xi + 2.0).sqrt();
    let (a_plus, a_minus) = (offset + spread, offset - spread);
    let x = SQRT_2 / 2.0 * xi;
    let y = x;
    let z = -(SQRT_2 * xi + xi * xi) / (SQRT_2 * xi + 2.0);
    let lhs2 = (1.0 + z).powi(2) - (a_plus + a_minus).powi(2);
    let lhs3 = (1.0 - z).powi(2) - (a_plus - a_minus).powi(2);
    Ok(VwReport {
        a_plus,
        a_minus,
        x,
        y,
        z,
        cond1: (-1.0 - Z_SLACK..=1.0 + Z_SLACK).contains(&z),
        lhs2,
        rhs2: (x - y).powi(2),
        lhs3,
        rhs3: (x + y).powi(2),
        saturation2: lhs2,
        saturation3: lhs3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_violation_values() {
        let r = vw_check(0.0).unwrap();
        assert!((r.a_plus - 1.0).abs() < 1e-12);
        assert!((r.a_minus + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((r.x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert_eq!(r.x, r.y);
        assert!((r.z + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn saturation_and_unit_a_plus_across_grid() {
        for k in 0..=20 {
            let b = k as f64 / 20.0;
            let r = vw_check(b).unwrap();
            assert!(r.cond1);
            assert!(r.saturation2.abs() < 1e-12);
            assert!(r.saturation3.abs() < 1e-12);
            assert!((r.a_plus - 1.0).abs() < 1e-12);
            let xi = (1.0 + b * b).sqrt();
            let closed = ((2.0 - xi * xi) / (SQRT_2 * xi + 2.0)).powi(2);
            assert!(((1.0 + r.z).powi(2) - closed).abs() < 1e-12);
            assert!((r.rhs3 - 2.0 * xi * xi).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(vw_check(1.01).is_err());
    }
}
