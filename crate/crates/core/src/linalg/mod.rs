//! Dense complex linear algebra at desk scale.

pub mod dense;
pub mod eigen;
pub mod matrix;
pub mod poly;
pub mod svd;

pub use dense::{adjugate, adjugate_column, determinant, determinant_scale, inverse, Lu};
pub use eigen::{eigenvalues, set_distance};
pub use matrix::{vec_norm, ComplexMatrix, C64};
pub use poly::{resultant, sylvester_matrix, ComplexPolynomial};
pub use svd::{default_rank_tolerance, numerical_rank, relative_rank, singular_values, Svd};

/// Relative threshold used for the rank assertions of the theory.
pub const RANK_FACTOR: f64 = 1e-8;
