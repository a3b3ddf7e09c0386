//! The algebraic reduction: ends, normals and kernel coefficients, the
//! interaction matrix, the flux map and its Jacobian, spinor data and residues.

mod certificate;
mod data;
mod spinor;
mod system;

pub use certificate::{best_columns, flux_jacobian, flux_jacobian_rank, genericity_certificate, jacobian_scale, GenericityCertificate};
pub use data::{inverse_stereographic, stereographic, EndConfiguration, FluxData, FluxEnd};
pub use spinor::{end_residue, spinor_data, EndResidue, SpinorData, BRANCH_TOL, RESIDUE_NODES};
pub use system::{
    alternate_residuals, checked_interaction_matrix, det_gradient_q, difference_product, flux_map, flux_map_with,
    flux_values, interaction_matrix, interaction_matrix_dq, interaction_matrix_with, kernel_vector,
    kernel_vector_with, min_separation, system_residuals, w_conditions, AlternateResiduals, FluxMapValue,
    SystemResiduals, Variant, W_TOL,
};
