//! Two-copy measurement of `TᵀT`.
//!
//! With `U = I − 4|Ψ⁻⟩⟨Ψ⁻|` acting on the two A photons and `σ_m ⊗ σ_n` on
//! the two B photons,
//!
//! ```text
//! (TᵀT)_mn = Tr[(ρ⊗ρ)' U_{A1A2} ⊗ (σ_m ⊗ σ_n)_{B1B2}]
//! ```
//!
//! where `(ρ⊗ρ)'` is the product reordered to `A1 A2 B1 B2`. Six unordered
//! settings determine the symmetric matrix, and with it `M` and `B`.
//!
//! The simulator realizes the singlet projection through two regimes. In the
//! overlap regime the A photons meet at a beam splitter and exit by different
//! ports exactly on their singlet component; in the delayed regime they are
//! distinguishable and exit by different ports half of the time. Values
//! `−4r` and `+r` are assigned to cross-port events, `r` being the product
//! of the two B outcomes.

mod estimate;
mod operators;
mod sampling;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error};
use crate::qcore::Axis;

pub use estimate::{b_from_exact, b_from_ttt, estimate_ttt, BEstimate, Estimator, TttEstimate};
pub use operators::{
    swap_operator, swap_reorder, trace_out_last_pair, ttt_expectation, u_operator,
};
pub use sampling::{
    event_probabilities, sample_schedule, sample_shots, EventProbabilities, LeftOutcome, Regime,
    RegimeWeights, ShotRecord, ShotStream,
};

/// Pauli pair measured on the two B photons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Setting {
    pub m: Axis,
    pub n: Axis,
}

/// The six unordered settings, in measurement order.
pub const SCHEDULE: [Setting; 6] = [
    Setting::new(Axis::X, Axis::X),
    Setting::new(Axis::X, Axis::Y),
    Setting::new(Axis::X, Axis::Z),
    Setting::new(Axis::Y, Axis::Y),
    Setting::new(Axis::Y, Axis::Z),
    Setting::new(Axis::Z, Axis::Z),
];

impl Setting {
    pub const fn new(m: Axis, n: Axis) -> Self {
        Self { m, n }
    }

    /// Position of the unordered pair in [`SCHEDULE`].
    pub fn schedule_index(self) -> usize {
        let (a, b) = (self.m.index(), self.n.index());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        // rows of the upper triangle hold 3, 2, 1 entries
        [0, 3, 5][lo] + hi - lo
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m, self.n)
    }
}

impl std::str::FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let axis = |c: char| match c {
            'x' => Ok(Axis::X),
            'y' => Ok(Axis::Y),
            'z' => Ok(Axis::Z),
            _ => Err(domain(format!(
                "setting {s:?}: axis {c:?} is not x, y or z"
            ))),
        };
        let chars: Vec<char> = s.trim().chars().collect();
        match chars.as_slice() {
            [m, n] => Ok(Setting::new(axis(*m)?, axis(*n)?)),
            _ => Err(domain(format!("setting {s:?} is not two axis letters"))),
        }
    }
}

impl Serialize for Setting {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_indices_are_positions() {
        for (k, s) in SCHEDULE.iter().enumerate() {
            assert_eq!(s.schedule_index(), k);
            assert_eq!(Setting::new(s.n, s.m).schedule_index(), k);
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in SCHEDULE {
            assert_eq!(s.to_string().parse::<Setting>().unwrap(), s);
        }
        assert!("xw".parse::<Setting>().is_err());
        assert!("xyz".parse::<Setting>().is_err());
    }
}
