//! Estimators of `TᵀT` from shot streams, and `M`, `B` from the estimate.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::measures::b_from_m;
use crate::qcore::symmetric_eig3;

use super::sampling::{LeftOutcome, Regime, ShotStream};
use super::SCHEDULE;

/// Noise may push an estimated `M` this far outside `[0, 2]` before it is flagged.
const M_RANGE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Estimator {
    /// `−4 S_A/K_A + 2 S_B/K_B`; consistent for any regime weights.
    RegimeNormalized,
    /// `Σ a_k / K₀` with `K₀` the number of `|a| = 1` shots; consistent only
    /// for the 1 : 2 overlap-to-delayed weighting.
    #[serde(rename = "pooledK0")]
    PooledK0,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TttEstimate {
    pub matrix: [[f64; 3]; 3],
    #[serde(rename = "stderr")]
    pub std_err: [[f64; 3]; 3],
    /// Total shots over the six settings.
    #[serde(rename = "shots")]
    pub shots_used: usize,
    pub estimator: Estimator,
}

/// Sufficient statistics of one stream.
#[derive(Default)]
struct Tally {
    overlap_shots: f64,
    /// Sum of `r` over overlap cross events; also the count of those events
    /// is their sum of squares.
    overlap_sum: f64,
    overlap_cross: f64,
    delayed_shots: f64,
    delayed_sum: f64,
    delayed_cross: f64,
    sum_a_sq: f64,
}

impl Tally {
    fn of(stream: &ShotStream) -> Self {
        let mut t = Tally::default();
        for s in &stream.shots {
            let cross = s.left == LeftOutcome::Cross;
            let r = f64::from(s.right);
            match s.regime {
                Regime::Overlap => {
                    t.overlap_shots += 1.0;
                    if cross {
                        t.overlap_sum += r;
                        t.overlap_cross += 1.0;
                    }
                }
                Regime::Delayed => {
                    t.delayed_shots += 1.0;
                    if cross {
                        t.delayed_sum += r;
                        t.delayed_cross += 1.0;
                    }
                }
            }
            t.sum_a_sq += f64::from(s.a).powi(2);
        }
        t
    }

    /// Mean of `r·[cross]` and the variance of that mean.
    fn regime_mean(sum: f64, sum_sq: f64, shots: f64) -> (f64, f64) {
        let mean = sum / shots;
        (mean, (sum_sq / shots - mean * mean).max(0.0) / shots)
    }

    fn regime_normalized(&self) -> Result<(f64, f64)> {
        if self.overlap_shots == 0.0 {
            return Err(Error::EmptyRegime("overlap"));
        }
        if self.delayed_shots == 0.0 {
            return Err(Error::EmptyRegime("delayed"));
        }
        let (ma, va) = Self::regime_mean(self.overlap_sum, self.overlap_cross, self.overlap_shots);
        let (mb, vb) = Self::regime_mean(self.delayed_sum, self.delayed_cross, self.delayed_shots);
        Ok((-4.0 * ma + 2.0 * mb, (16.0 * va + 4.0 * vb).sqrt()))
    }

    fn pooled(&self) -> Result<(f64, f64)> {
        let k0 = self.delayed_cross;
        if k0 == 0.0 {
            return Err(Error::EmptyRegime("delayed cross-port"));
        }
        let sum_a = -4.0 * self.overlap_sum + self.delayed_sum;
        let ratio = sum_a / k0;
        // delta method for a ratio of sums: Σ(a − R δ)² / K₀²
        let resid = self.sum_a_sq - 2.0 * ratio * self.delayed_sum + ratio * ratio * k0;
        Ok((ratio, resid.max(0.0).sqrt() / k0))
    }
}

/// Fills the symmetric estimate from one stream per unordered setting.
pub fn estimate_ttt(streams: &[ShotStream], estimator: Estimator) -> Result<TttEstimate> {
    let mut seen = [false; 6];
    let mut matrix = [[0.0; 3]; 3];
    let mut std_err = [[0.0; 3]; 3];
    let mut shots_used = 0;
    for stream in streams {
        let k = stream.setting.schedule_index();
        if seen[k] {
            return Err(domain(format!("setting {} appears twice", stream.setting)));
        }
        seen[k] = true;
        let tally = Tally::of(stream);
        let (value, se) = match estimator {
            Estimator::RegimeNormalized => tally.regime_normalized()?,
            Estimator::PooledK0 => tally.pooled()?,
        };
        let (m, n) = (stream.setting.m.index(), stream.setting.n.index());
        for (i, j) in [(m, n), (n, m)] {
            matrix[i][j] = value;
            std_err[i][j] = se;
        }
        shots_used += stream.shots.len();
    }
    if let Some(k) = seen.iter().position(|&s| !s) {
        return Err(domain(format!("no shots for setting {}", SCHEDULE[k])));
    }
    Ok(TttEstimate {
        matrix,
        std_err,
        shots_used,
        estimator,
    })
}

/// `M`, `B` and their standard errors from an estimated `TᵀT`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BEstimate {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "M_stderr")]
    pub m_std_err: f64,
    #[serde(rename = "B_stderr")]
    pub b_std_err: f64,
    /// The raw `M` fell outside `[0, 2]` and was clamped before taking `B`.
    #[serde(rename = "M_out_of_range")]
    pub m_out_of_range: bool,
}

pub fn b_from_ttt(estimate: &TttEstimate) -> Result<BEstimate> {
    b_with_errors(&estimate.matrix, &estimate.std_err)
}

/// [`b_from_ttt`] for an exactly known matrix.
pub fn b_from_exact(ttt: &[[f64; 3]; 3]) -> Result<BEstimate> {
    b_with_errors(ttt, &[[0.0; 3]; 3])
}

fn b_with_errors(ttt: &[[f64; 3]; 3], std_err: &[[f64; 3]; 3]) -> Result<BEstimate> {
    let (values, vectors) = symmetric_eig3(ttt)?;
    let m = values[1] + values[2];
    let m_out_of_range = !(-M_RANGE_SLACK..=2.0 + M_RANGE_SLACK).contains(&m);
    let b = b_from_m(m.clamp(0.0, 2.0));

    // dM = Tr(P dA) with P the projector on the top two eigenvectors; each
    // off-diagonal estimate enters A twice
    let proj = |i: usize, j: usize| vectors[1][i] * vectors[1][j] + vectors[2][i] * vectors[2][j];
    let mut var_m = 0.0;
    for i in 0..3 {
        for j in i..3 {
            let weight = if i == j { proj(i, i) } else { 2.0 * proj(i, j) };
            var_m += (weight * std_err[i][j]).powi(2);
        }
    }
    let m_std_err = var_m.sqrt();
    // dB = dM / 2B, capped by the sqrt(dM) spread of B near M = 1
    let b_std_err = if b > 0.0 {
        (m_std_err / (2.0 * b)).min(m_std_err.sqrt())
    } else {
        m_std_err.sqrt()
    };
    Ok(BEstimate {
        m,
        b,
        m_std_err,
        b_std_err,
        m_out_of_range,
    })
}
