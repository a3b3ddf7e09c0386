//! The symmetric `(m+1)`-end family, the μ-deformed matrix `A(q, μ)` and the
//! closed forms at `q⁰`, the `Γ_{m+1}(μ)` rank certificate and the
//! continuation to regular points of the flux map.

mod closed;
mod continuation;
mod family;
mod gamma;
mod matrix;

pub use closed::{
    adjugate_profile_check, c1_matrix, c2_matrix, chi_closed, closed_form_scalars, psi_ell, ring_block, y0_matrix,
    ClosedForm,
};
pub use continuation::{continuation_newton, continuation_step, ContinuationPoint, MAX_OFFSET, NEWTON_ITERATIONS, NEWTON_TOL};
pub use family::{base_point, symmetric_configuration, zeta, zeta_pow, SymmetricFamily};
pub use gamma::{gamma_matrix, mu_flux_values, GammaClosedForm};
pub use matrix::{
    adjugate_derivative, adjugate_derivative_fd, corner_probe, det_gradient, det_hessian_row, mixed_second_derivative,
    mixed_second_derivative_fd, mu_curve, mu_matrix, mu_matrix_dq, mu_matrix_dq2, p_slope, p_slope_closed, p_slope_fd,
    p_slope_stated, DetGradient,
};
