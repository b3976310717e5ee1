//! Dense complex linear algebra and two-qubit state plumbing.

pub mod eigen;
pub mod io;
pub mod matrix;
pub mod state;

pub use eigen::{hermitian_eig, symmetric_eig3, EigenSystem};
pub use io::{parse_state, serialize_state};
pub use matrix::{normalized, tensor, vec_norm, ComplexMatrix, C64};
pub use state::{
    bloch_decompose, partial_transpose, pauli, pauli_expectation, pauli_pair, Axis,
    BlochDecomposition, DensityMatrix, VALIDATION_TOL,
};
