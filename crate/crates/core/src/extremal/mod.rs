//! Extremal states and optimality checks: envelopes of N, C and E_R at fixed
//! CHSH violation, the `B = 0` concurrence-negativity region, and KKT and
//! Verstraete-Wolf certificates for the maximal family.

mod bounds;
mod kkt;
mod region;
mod vw;

pub use bounds::{c_max, lower_bounds, n_max, uniform_grid, BoundCurves, BoundPoint, LowerBounds};
pub use kkt::{chsh_gradient_operator, kkt_check, kkt_check_state, KktReport, SUPPORT_TOL};
pub use region::{
    c_of_n_upper_b0, lower_boundary_b0, mixture_rho_q, n1, n2, n3, n4, onto_zero_violation,
    ordering_control_pair, ordering_counterexamples, plateau_alpha_range, plateau_params,
    plateau_state, region_landmarks, Landmark, LowerBoundary, OrderingPair, OrderingPattern,
    ORDERING_EQUAL_TOL, ORDERING_MARGIN,
};
pub use vw::{vw_check, VwReport};
