//! Numerical inverse flux problem: normalization, Gauss–Newton solve and
//! certification of candidate solutions.

mod certify;
mod gauss_newton;
mod normalize;

pub use certify::{
    certify_solution, Check, SolutionReport, FLUX_SUM_TOL, KERNEL_TOL, MONODROMY_TOL, PARALLEL_TOL, RATIO_SPREAD_TOL,
    REALNESS_TOL,
};
pub use gauss_newton::{perturb_weight, solve, SolverOptions, SolverProblem, SolverResult, SolverStatus};
pub use normalize::{normalize_configuration, normalize_with_kernel};
