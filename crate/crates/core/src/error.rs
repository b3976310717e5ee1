use std::fmt;

use thiserror::Error;

/// Which structural property of a density matrix failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateCheck {
    Dimension,
    Hermitian,
    Trace,
    Psd,
}

impl fmt::Display for StateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StateCheck::Dimension => "dimension",
            StateCheck::Hermitian => "hermitian",
            StateCheck::Trace => "trace",
            StateCheck::Psd => "psd",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not hermitian (residual {0:.3e})")]
    NonHermitianInput(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("eigensolver did not converge after {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid state: {check} check failed (value {value:.3e})")]
    InvalidState { check: StateCheck, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("correlation matrix is degenerate (largest eigenvalue of T^T T is {0:.3e})")]
    DegenerateCorrelation(f64),

    #[error("state is not entangled (negativity {0:.3e})")]
    NotEntangled(f64),

    #[error("relative entropy diverges for every feasible iterate")]
    SupportError,

    #[error("CHSH gradient undefined: radicand {0:.3e} at the B = 0 boundary")]
    UndefinedGradient(f64),

    #[error("state has rank {0}; the extremality check handles rank <= 2")]
    RankError(usize),

    #[error("estimator needs {0} shots but none were recorded")]
    EmptyRegime(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Rejects values outside `[lo, hi]` (and NaN) with a [`Error::Domain`].
pub(crate) fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        Err(domain(format!("{name} = {value} outside [{lo}, {hi}]")))
    } else {
        Ok(())
    }
}
