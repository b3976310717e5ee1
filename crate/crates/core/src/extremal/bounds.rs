//! Closed-form envelopes of negativity, concurrence and REE at fixed CHSH
//! violation `B`, written in terms of `ξ = √(1 + B²)`.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{check_range, Result};
use crate::measures::binary_entropy;

fn xi(b: f64) -> f64 {
    (1.0 + b * b).sqrt()
}

/// Largest negativity compatible with violation `b`.
pub fn n_max(b: f64) -> Result<f64> {
    check_range("B", b, 0.0, 1.0)?;
    let xi = xi(b);
    let root = (5.0 * xi * xi - 2.0 * SQRT_2 * xi + 2.0).sqrt();
    Ok(SQRT_2 / 4.0 * (xi + root) - 0.5)
}

/// Largest concurrence compatible with violation `b`.
///
/// `(√2ξ² + 2ξ) / (2√(ξ² + 2√2ξ + 2))` with the radicand `(ξ + √2)²`,
/// which reduces to `ξ/√2`.
pub fn c_max(b: f64) -> Result<f64> {
    check_range("B", b, 0.0, 1.0)?;
    Ok(xi(b) / SQRT_2)
}

/// Lower envelopes at violation `B`, all attained by `rho_min(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBounds {
    pub n_min: f64,
    pub c_min: f64,
    /// `1 − h((1+B)/2)` in bits.
    pub e_r_min: f64,
}

pub fn lower_bounds(b: f64) -> Result<LowerBounds> {
    check_range("B", b, 0.0, 1.0)?;
    Ok(LowerBounds {
        n_min: b,
        c_min: b,
        e_r_min: 1.0 - binary_entropy((1.0 + b) / 2.0)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundPoint {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "N_max")]
    pub n_max: f64,
    #[serde(rename = "C_max")]
    pub c_max: f64,
    #[serde(rename = "N_min")]
    pub n_min: f64,
    #[serde(rename = "C_min")]
    pub c_min: f64,
    #[serde(rename = "ERmin")]
    pub e_r_min: f64,
}

/// All bound curves sampled on a grid of `B` values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCurves {
    pub points: Vec<BoundPoint>,
}

impl BoundCurves {
    pub fn on_grid(grid: &[f64]) -> Result<Self> {
        let points = grid
            .iter()
            .map(|&b| {
                let lower = lower_bounds(b)?;
                Ok(BoundPoint {
                    b,
                    n_max: n_max(b)?,
                    c_max: c_max(b)?,
                    n_min: lower.n_min,
                    c_min: lower.c_min,
                    e_r_min: lower.e_r_min,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { points })
    }
}

/// `count` equally spaced points covering `[0, 1]`.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|k| k as f64 / (count - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_max_values() {
        assert!((n_max(0.0).unwrap() - 0.575666).abs() < 1e-6);
        assert!((n_max(0.5).unwrap() - 0.692759).abs() < 1e-6);
        assert!((n_max(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c_max_values() {
        assert!((c_max(0.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((c_max(0.5).unwrap() - 0.790569).abs() < 1e-6);
        assert!((c_max(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c_max_matches_unsimplified_form() {
        for b in uniform_grid(11) {
            let xi = (1.0 + b * b).sqrt();
            let printed =
                (SQRT_2 * xi * xi + 2.0 * xi) / (2.0 * (xi * xi + 2.0 * SQRT_2 * xi + 2.0).sqrt());
            assert!((c_max(b).unwrap() - printed).abs() < 1e-14);
        }
    }

    #[test]
    fn lower_bound_values() {
        let lb = lower_bounds(0.5).unwrap();
        assert_eq!((lb.n_min, lb.c_min), (0.5, 0.5));
        assert!((lb.e_r_min - 0.188722).abs() < 1e-6);
        assert_eq!(lower_bounds(0.0).unwrap().e_r_min, 0.0);
        assert!((lower_bounds(1.0).unwrap().e_r_min - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(n_max(-0.1).is_err());
        assert!(c_max(1.5).is_err());
        assert!(lower_bounds(f64::NAN).is_err());
    }

    #[test]
    fn curves_dominate_lower_bounds() {
        let curves = BoundCurves::on_grid(&uniform_grid(21)).unwrap();
        assert_eq!(curves.points.len(), 21);
        for p in &curves.points {
            assert!(p.n_max >= p.b - 1e-15 && p.c_max >= p.b - 1e-15);
            for v in [p.n_max, p.c_max, p.n_min, p.c_min, p.e_r_min] {
                assert!((0.0..=1.0 + 1e-15).contains(&v));
            }
        }
    }
}
