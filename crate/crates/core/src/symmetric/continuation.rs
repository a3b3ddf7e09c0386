use serde::{Deserialize, Serialize};

use super::closed::ClosedForm;
use super::family::base_point;
use crate::error::{Error, Result};
use crate::flux::{checked_interaction_matrix, flux_jacobian_rank, kernel_vector_with, EndConfiguration, Variant};
use crate::linalg::{adjugate, determinant, ComplexMatrix, C64};

pub const MAX_OFFSET: f64 = 0.05;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_ITERATIONS: usize = 30;

/// `∂Ǎ_p/∂p_n`: column `n` carries `p̄_j/(q_j − q_n)`, row `n` carries `p_k/(q_n − q_k)`.
pub(crate) fn checked_matrix_dp_last(p: &[C64], q: &[C64]) -> ComplexMatrix {
    let n = q.len();
    let last = n - 1;
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::new(0.0, 0.0)
        } else if c == last {
            p[r].conj() / (q[r] - q[c])
        } else if r == last {
            p[c] / (q[r] - q[c])
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Result of moving `q₁` off the symmetric point and re-solving for `p_{m+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationPoint {
    pub config: EndConfiguration,
    pub iterations: usize,
    /// `rank J̌` at the output.
    pub jacobian_rank: usize,
}

/// Newton solve of `det Ǎ_p(q) = 0` in `p_{m+1}` with `q₁ = 1 + offset`,
/// everything else at `(√μ q⁰, q⁰)`. Returns `(p, q, iterations)`.
pub fn continuation_newton(m: usize, mu: f64, offset: C64) -> Result<(Vec<C64>, Vec<C64>, usize)> {
    if m < 4 {
        return Err(Error::Argument(format!("continuation needs m >= 4, got {m}")));
    }
    if !(mu > 0.0) || mu == 1.0 {
        return Err(Error::ExcludedMu(format!("continuation needs mu > 0, mu != 1, got {mu}")));
    }
    if !(offset.norm() <= MAX_OFFSET) {
        return Err(Error::Argument(format!("|offset| must be at most {MAX_OFFSET}, got {}", offset.norm())));
    }
    if ClosedForm::new(m, mu)?.f == 0.0 {
        return Err(Error::ExcludedMu(format!("f vanishes at mu = {mu}")));
    }
    let mut q = base_point(m);
    let mut p: Vec<C64> = q.iter().map(|z| z * mu.sqrt()).collect();
    q[0] += offset;
    for it in 1..=NEWTON_ITERATIONS {
        let a = checked_interaction_matrix(&p, &q)?;
        let value = determinant(&a)?;
        let slope = (&checked_matrix_dp_last(&p, &q) * &adjugate(&a)?).trace();
        if slope.norm() == 0.0 || !slope.is_finite() {
            return Err(Error::Continuation(format!("vanishing p-slope at iteration {it}")));
        }
        let step = value / slope;
        p[m] -= step;
        if !p[m].is_finite() {
            return Err(Error::Continuation("Newton iterate left the finite range".into()));
        }
        if step.norm() <= NEWTON_TOL * (1.0 + p[m].norm()) {
            return Ok((p, q, it));
        }
    }
    Err(Error::Continuation(format!("no convergence in {NEWTON_ITERATIONS} iterations")))
}

/// One implicit-function step away from the symmetric point; the output must
/// be a regular point, `rank J̌ = n − 4`.
pub fn continuation_step(m: usize, mu: f64, offset: C64) -> Result<ContinuationPoint> {
    let (p, q, iterations) = continuation_newton(m, mu, offset)?;
    let n = m + 1;
    let rank = flux_jacobian_rank(&p, &q, Variant::Checked)?;
    if rank != n - 4 {
        return Err(Error::Regularity { found: rank, expected: n - 4 });
    }
    let b = kernel_vector_with(&p, &q, Variant::Checked)?;
    Ok(ContinuationPoint { config: EndConfiguration::new(p, q, b)?, iterations, jacobian_rank: rank })
}
