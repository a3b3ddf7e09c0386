pub mod cofactor;
pub mod diff;
pub mod error;
pub mod flux;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod par;
pub mod solver;
pub mod symmetric;
pub mod verify;

pub use error::{Error, HypothesisFailure, Result};
pub use linalg::{ComplexMatrix, ComplexPolynomial, C64};
pub use par::Execution;
