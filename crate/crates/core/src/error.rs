use thiserror::Error;

/// Errors raised by the catenoid library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("end positions {0} and {1} coincide")]
    CoincidentEnds(usize, usize),

    #[error("normal points at the north pole and has no finite stereographic image")]
    UnsupportedNormal,

    #[error("interaction matrix has rank below n-1; kernel is not one-dimensional")]
    DegenerateKernel,

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("cofactor derivative hypothesis failed: {0}")]
    Hypothesis(HypothesisFailure),

    #[error("f^n vanishes; the f^n-normalised chart of the flux map is invalid")]
    ChartFailure,

    #[error("contour of radius {radius} around end {end} touches or encloses another pole")]
    Geometry { end: usize, radius: f64 },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("value of mu is excluded: {0}")]
    ExcludedMu(String),

    #[error("continuation failed: {0}")]
    Continuation(String),

    #[error("regularity failed: rank {found}, expected {expected}")]
    Regularity { found: usize, expected: usize },

    #[error("normalization unreachable: {0}")]
    Normalization(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("spinor data is branched: {0}")]
    Branched(String),
}

/// Which hypothesis of the singular-cofactor derivative formula was violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesisFailure {
    /// `det A(0) != 0`.
    SingularDeterminant { value: f64, bound: f64 },
    /// `d/dq det A(q) != 0` at `q = 0`.
    DeterminantSlope { value: f64, bound: f64 },
    /// `Tr(X B) == 0`.
    ProbeTrace { value: f64, bound: f64 },
}

impl std::fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SingularDeterminant { value, bound } => {
                write!(f, "(b1) |det A(0)| = {value:e} exceeds {bound:e}")
            }
            Self::DeterminantSlope { value, bound } => {
                write!(f, "(b1) |d det A/dq(0)| = {value:e} exceeds {bound:e}")
            }
            Self::ProbeTrace { value, bound } => {
                write!(f, "trace condition |Tr(XB)| = {value:e} below {bound:e}")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
