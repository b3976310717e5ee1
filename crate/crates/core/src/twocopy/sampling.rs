//! Shot-level simulation of one setting.

use std::io::{self, Write};

use serde::Serialize;

use crate::error::{check_range, domain, Result};
use crate::families::BellState;
use crate::qcore::{pauli_pair, tensor, ComplexMatrix, DensityMatrix};
use crate::rng::{substream, uniform};

use super::operators::swap_reorder;
use super::{Setting, SCHEDULE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// The A photons overlap on the beam splitter.
    Overlap,
    /// The A photons are delayed with respect to each other.
    Delayed,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Overlap => "overlap",
            Regime::Delayed => "delayed",
        }
    }
}

/// Left-module result: a coincidence across the two output ports, or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LeftOutcome {
    Cross,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShotRecord {
    pub regime: Regime,
    pub left: LeftOutcome,
    /// Product of the two B-photon outcomes.
    pub right: i8,
    /// Assigned value: `−4r` or `+r` on cross events, 0 otherwise.
    pub a: i8,
}

/// Probability of drawing each regime per shot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeWeights {
    pub overlap: f64,
    pub delayed: f64,
}

impl RegimeWeights {
    pub fn new(overlap: f64, delayed: f64) -> Result<Self> {
        check_range("overlap weight", overlap, 0.0, 1.0)?;
        check_range("delayed weight", delayed, 0.0, 1.0)?;
        if (overlap + delayed - 1.0).abs() > 1e-12 {
            return Err(domain(format!(
                "regime weights {overlap} + {delayed} do not sum to 1"
            )));
        }
        Ok(Self { overlap, delayed })
    }
}

/// The 1 : 2 split under which the pooled estimator is consistent.
impl Default for RegimeWeights {
    fn default() -> Self {
        Self {
            overlap: 1.0 / 3.0,
            delayed: 2.0 / 3.0,
        }
    }
}

/// Outcome probabilities of one setting, from the reordered two-copy state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EventProbabilities {
    /// Overlap regime: `P(cross, r = +1)` and `P(cross, r = −1)`.
    pub cross_plus: f64,
    pub cross_minus: f64,
    /// `P(r = +1)`, the same in both regimes.
    pub right_plus: f64,
}

impl EventProbabilities {
    /// `⟨P_s ⊗ I⟩`: overlap-regime probability of a cross event.
    pub fn cross_rate(&self) -> f64 {
        self.cross_plus + self.cross_minus
    }
}

pub fn event_probabilities(rho: &DensityMatrix, setting: Setting) -> EventProbabilities {
    let reordered = swap_reorder(rho, rho);
    let singlet = BellState::PsiMinus.projector();
    let corr = pauli_pair(setting.m, setting.n);
    let id = ComplexMatrix::identity(4);
    let expect = |a: &ComplexMatrix, b: &ComplexMatrix| reordered.trace_product(&tensor(a, b)).re;
    let singlet_rate = expect(&singlet, &id);
    let singlet_corr = expect(&singlet, &corr);
    let marginal_corr = expect(&id, &corr);
    let unit = |p: f64| p.clamp(0.0, 1.0);
    EventProbabilities {
        cross_plus: unit((singlet_rate + singlet_corr) / 2.0),
        cross_minus: unit((singlet_rate - singlet_corr) / 2.0),
        right_plus: unit((1.0 + marginal_corr) / 2.0),
    }
}

/// Shots of one setting, in acquisition order.
#[derive(Clone, Debug, PartialEq)]
pub struct ShotStream {
    pub setting: Setting,
    pub weights: RegimeWeights,
    pub shots: Vec<ShotRecord>,
}

impl ShotStream {
    /// CSV with columns `shot_index,regime,a_value`.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "shot_index,regime,a_value")?;
        for (k, s) in self.shots.iter().enumerate() {
            writeln!(out, "{k},{},{}", s.regime.name(), s.a)?;
        }
        Ok(())
    }
}

fn draw(p: &EventProbabilities, weights: &RegimeWeights, u: [f64; 3]) -> ShotRecord {
    let sign = |plus: bool| if plus { 1 } else { -1 };
    if u[0] < weights.overlap {
        let p_minus = 1.0 - p.right_plus;
        let (cross, right) = if u[1] < p.cross_plus {
            (true, 1)
        } else if u[1] < p.cross_plus + p.cross_minus {
            (true, -1)
        } else {
            // the rest splits by the non-singlet remainder of each outcome
            let rest_plus = (p.right_plus - p.cross_plus).max(0.0);
            let rest_minus = (p_minus - p.cross_minus).max(0.0);
            let total = rest_plus + rest_minus;
            let plus = total > 0.0 && u[2] * total < rest_plus;
            (false, sign(plus))
        };
        ShotRecord {
            regime: Regime::Overlap,
            left: if cross {
                LeftOutcome::Cross
            } else {
                LeftOutcome::Inconclusive
            },
            right,
            a: if cross { -4 * right } else { 0 },
        }
    } else {
        let cross = u[1] < 0.5;
        let right = sign(u[2] < p.right_plus);
        ShotRecord {
            regime: Regime::Delayed,
            left: if cross {
                LeftOutcome::Cross
            } else {
                LeftOutcome::Inconclusive
            },
            right,
            a: if cross { right } else { 0 },
        }
    }
}

/// Simulates `shots` measurements of one setting. The random stream is keyed
/// by `(seed, schedule index)`, so settings can be sampled in any order.
pub fn sample_shots(
    rho: &DensityMatrix,
    setting: Setting,
    shots: usize,
    weights: RegimeWeights,
    seed: u64,
) -> Result<ShotStream> {
    let weights = RegimeWeights::new(weights.overlap, weights.delayed)?;
    if shots == 0 {
        return Err(domain("shots must be at least 1"));
    }
    let p = event_probabilities(rho, setting);
    let mut rng = substream(seed, setting.schedule_index() as u64);
    let records = (0..shots)
        .map(|_| {
            let u = [uniform(&mut rng), uniform(&mut rng), uniform(&mut rng)];
            draw(&p, &weights, u)
        })
        .collect();
    Ok(ShotStream {
        setting,
        weights,
        shots: records,
    })
}

/// All six settings, sampled on separate threads.
pub fn sample_schedule(
    rho: &DensityMatrix,
    shots: usize,
    weights: RegimeWeights,
    seed: u64,
) -> Result<Vec<ShotStream>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = SCHEDULE
            .iter()
            .map(|&s| scope.spawn(move || sample_shots(rho, s, shots, weights, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling thread panicked"))
            .collect()
    })
}
