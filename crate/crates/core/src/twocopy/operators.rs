use crate::families::BellState;
use crate::qcore::{pauli_pair, tensor, ComplexMatrix, DensityMatrix, C64};

use super::Setting;

/// `U = I − 4|Ψ⁻⟩⟨Ψ⁻|`, spectrum {−3, 1, 1, 1}.
pub fn u_operator() -> ComplexMatrix {
    &ComplexMatrix::identity(4) - &BellState::PsiMinus.projector().scale_real(4.0)
}

/// Two-qubit swap `|ab⟩ → |ba⟩`.
pub fn swap_operator() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
    .expect("4x4")
}

/// `ρ₁⊗ρ₂` with the middle slots exchanged, taking the slot order from
/// `A1 B1 A2 B2` to `A1 A2 B1 B2`.
pub fn swap_reorder(rho1: &DensityMatrix, rho2: &DensityMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let s = tensor(&tensor(&id, &swap_operator()), &id);
    let product = tensor(rho1.matrix(), rho2.matrix());
    &(&s * &product) * &s
}

/// Partial trace of a 16x16 operator over its last two qubits.
pub fn trace_out_last_pair(m: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!((m.rows(), m.cols()), (16, 16));
    ComplexMatrix::from_fn(4, 4, |i, j| {
        (0..4).map(|k| m[(4 * i + k, 4 * j + k)]).sum::<C64>()
    })
}

/// `Tr[(ρ⊗ρ)' U ⊗ σ_m⊗σ_n]`, which equals `(TᵀT)_mn`.
pub fn ttt_expectation(rho: &DensityMatrix, setting: Setting) -> f64 {
    let reordered = swap_reorder(rho, rho);
    let observable = tensor(&u_operator(), &pauli_pair(setting.m, setting.n));
    reordered.trace_product(&observable).re
}
