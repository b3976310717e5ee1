//! CHSH violation and entanglement of two-qubit states.

pub mod error;
pub mod extremal;
pub mod families;
pub mod measures;
pub mod qcore;
pub mod rng;
pub mod twocopy;

pub use error::{Error, Result, StateCheck};
pub use qcore::*;
