//! The μ-deformed matrix `A(q, μ)` and derivatives of its determinant.

use super::closed::ClosedForm;
use super::continuation::checked_matrix_dp_last;
use super::family::{base_point, zeta_pow};
use crate::cofactor::{fd_adjugate_derivative, singular_adjugate_derivative, FnCurve};
use crate::diff::{derivative, mixed_derivative, SECOND_STEP, STEP};
use crate::error::{Error, Result};
use crate::flux::{checked_interaction_matrix, min_separation};
use crate::linalg::{adjugate, determinant, ComplexMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_m(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::Argument(format!("m must be at least 3, got {m}")));
    }
    Ok(())
}

/// Numerator of entry `(j, k)`: `1 + μζ^{k−j}` in the ring block, 1 on the border.
fn numerator(m: usize, mu: f64, j: usize, k: usize) -> C64 {
    if j < m && k < m {
        ONE + zeta_pow(m, k as i64 - j as i64) * mu
    } else {
        ONE
    }
}

/// `A(q, μ)`; `q = None` means the base point `q⁰`.
pub fn mu_matrix(m: usize, mu: f64, q: Option<&[C64]>) -> Result<ComplexMatrix> {
    check_m(m)?;
    let q0;
    let q = match q {
        Some(q) => q,
        None => {
            q0 = base_point(m);
            &q0
        }
    };
    if q.len() != m + 1 {
        return Err(Error::Dimension(format!("expected {} positions, got {}", m + 1, q.len())));
    }
    if min_separation(q) <= 1e-10 {
        return Err(Error::Argument("coincident positions".into()));
    }
    Ok(raw(m, mu, q))
}

fn raw(m: usize, mu: f64, q: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m + 1, m + 1, |j, k| if j == k { ZERO } else { numerator(m, mu, j, k) / (q[j] - q[k]) })
}

/// `∂A/∂q_j`, exact.
pub fn mu_matrix_dq(m: usize, mu: f64, q: &[C64], j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m + 1, m + 1, |r, c| {
        if r == c {
            return ZERO;
        }
        let d = q[r] - q[c];
        let num = numerator(m, mu, r, c);
        if r == j {
            -num / (d * d)
        } else if c == j {
            num / (d * d)
        } else {
            ZERO
        }
    })
}

/// `∂²A/∂q_i∂q_j`, exact.
pub fn mu_matrix_dq2(m: usize, mu: f64, q: &[C64], i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m + 1, m + 1, |r, c| {
        if r == c {
            return ZERO;
        }
        let d = q[r] - q[c];
        let num = numerator(m, mu, r, c) * 2.0 / (d * d * d);
        let hits = |x: usize| (x == r) as i32 - (x == c) as i32;
        // d/dq_x of (q_r − q_c) is hits(x); entry is num/2 · d⁻¹
        match hits(i) * hits(j) {
            0 => ZERO,
            s => num * s as f64,
        }
    })
}

/// The curve `t ↦ A(q⁰ + t e_j, μ)`.
pub fn mu_curve(m: usize, mu: f64, j: usize) -> FnCurve<impl Fn(C64) -> ComplexMatrix + Sync> {
    let q0 = base_point(m);
    FnCurve::new(m + 1, move |t: C64| {
        let mut q = q0.clone();
        q[j] += t;
        raw(m, mu, &q)
    })
}

/// `E_{m+1}`: zero except a one in the bottom-right corner.
pub fn corner_probe(m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m + 1, m + 1, |i, j| if i == m && j == m { ONE } else { ZERO })
}

/// `∂B/∂q_j` at `(q⁰, μ)` from the singular-cofactor formula with probe `x`.
pub fn adjugate_derivative(m: usize, mu: f64, j: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_m(m)?;
    singular_adjugate_derivative(&mu_curve(m, mu, j), x)
}

/// Finite-difference oracle for `∂B/∂q_j` at `(q⁰, μ)`.
pub fn adjugate_derivative_fd(m: usize, mu: f64, j: usize) -> Result<ComplexMatrix> {
    check_m(m)?;
    fd_adjugate_derivative(&mu_curve(m, mu, j))
}

/// Gradient of `det A` at `(q⁰, μ)` by the two routes.
#[derive(Debug, Clone)]
pub struct DetGradient {
    /// `Tr(∂A/∂q_j · B)` with the exact `∂A/∂q_j`.
    pub trace: Vec<C64>,
    /// Central differences of `det A` along each `q_j`.
    pub fd: Vec<C64>,
    /// `‖A‖^{m+1}`, scale of `det A`, over the minimal separation.
    pub scale: f64,
}

pub fn det_gradient(m: usize, mu: f64) -> Result<DetGradient> {
    check_m(m)?;
    let q0 = base_point(m);
    let a = raw(m, mu, &q0);
    let b = adjugate(&a)?;
    let trace = (0..=m).map(|j| (&mu_matrix_dq(m, mu, &q0, j) * &b).trace()).collect();
    let fd = (0..=m)
        .map(|j| {
            derivative(
                |t| {
                    let mut q = q0.clone();
                    q[j] += t;
                    determinant(&raw(m, mu, &q)).expect("square")
                },
                STEP,
            )
        })
        .collect();
    let scale = a.frobenius_norm().powi(m as i32 + 1) / min_separation(&q0);
    Ok(DetGradient { trace, fd, scale })
}

/// `∂²det A/∂q₁∂q_{m+1}` at `(q⁰, μ)` as
/// `Tr(∂²A/∂q₁∂q_{m+1}·B + ∂A/∂q₁·∂B/∂q_{m+1})`, with `∂B/∂q_{m+1}` from the
/// singular-cofactor formula.
pub fn mixed_second_derivative(m: usize, mu: f64) -> Result<C64> {
    check_m(m)?;
    let q0 = base_point(m);
    let b = adjugate(&raw(m, mu, &q0))?;
    let db = adjugate_derivative(m, mu, m, &corner_probe(m))?;
    let t1 = (&mu_matrix_dq2(m, mu, &q0, 0, m) * &b).trace();
    let t2 = (&mu_matrix_dq(m, mu, &q0, 0) * &db).trace();
    Ok(t1 + t2)
}

/// Oracle: cross-stencil second difference of `det A` in `(q₁, q_{m+1})`.
pub fn mixed_second_derivative_fd(m: usize, mu: f64) -> Result<C64> {
    check_m(m)?;
    let q0 = base_point(m);
    Ok(mixed_derivative(
        |s, t| {
            let mut q = q0.clone();
            q[0] += s;
            q[m] += t;
            determinant(&raw(m, mu, &q)).expect("square")
        },
        SECOND_STEP,
    ))
}

/// `∂²det A/∂q₁∂q_j` at `(q⁰, μ)` for every `j`, by differencing the exact
/// trace gradient `Tr(∂A/∂q₁ · adj A)` along `q_j`.
pub fn det_hessian_row(m: usize, mu: f64) -> Result<Vec<C64>> {
    check_m(m)?;
    let q0 = base_point(m);
    let grad1 = |q: &[C64]| (&mu_matrix_dq(m, mu, q, 0) * &adjugate(&raw(m, mu, q)).expect("square")).trace();
    Ok((0..=m)
        .map(|j| {
            derivative(
                |t| {
                    let mut q = q0.clone();
                    q[j] += t;
                    grad1(&q)
                },
                STEP,
            )
        })
        .collect())
}

fn p_slope_precondition(mu: f64) -> Result<()> {
    if !(mu > 0.0) {
        return Err(Error::Argument(format!("p_slope needs mu > 0 so that p = sqrt(mu) q0 is real-scaled, got {mu}")));
    }
    if mu == 1.0 {
        return Err(Error::ExcludedMu("mu = 1 is the degenerate member of the family".into()));
    }
    Ok(())
}

fn sqrt_mu_point(m: usize, mu: f64) -> (Vec<C64>, Vec<C64>) {
    let q0 = base_point(m);
    let p = q0.iter().map(|z| z * mu.sqrt()).collect();
    (p, q0)
}

/// `∂det Ǎ_p(q⁰)/∂p_{m+1}` at `p = √μ q⁰` by the trace formula.
pub fn p_slope(m: usize, mu: f64) -> Result<C64> {
    check_m(m)?;
    p_slope_precondition(mu)?;
    let (p, q) = sqrt_mu_point(m, mu);
    let a = checked_interaction_matrix(&p, &q)?;
    Ok((&checked_matrix_dp_last(&p, &q) * &adjugate(&a)?).trace())
}

/// Oracle: central difference of `det Ǎ_p(q⁰)` in `p_{m+1}`.
pub fn p_slope_fd(m: usize, mu: f64) -> Result<C64> {
    check_m(m)?;
    p_slope_precondition(mu)?;
    let (p, q) = sqrt_mu_point(m, mu);
    Ok(derivative(
        |t| {
            let mut pp = p.clone();
            pp[m] += t;
            determinant(&checked_interaction_matrix(&pp, &q).expect("distinct")).expect("square")
        },
        STEP,
    ))
}

/// Closed form as printed in the source: `(m−1)²(μ−1)f(μ)/2`.
pub fn p_slope_stated(m: usize, mu: f64) -> Result<f64> {
    let cf = ClosedForm::new(m, mu)?;
    let m = m as f64;
    Ok((m - 1.0).powi(2) * (mu - 1.0) * cf.f / 2.0)
}

/// Closed form matching the trace formula: `−m √μ f(μ) ψ(μ)`.
pub fn p_slope_closed(m: usize, mu: f64) -> Result<f64> {
    let cf = ClosedForm::new(m, mu)?;
    Ok(-(m as f64) * mu.sqrt() * cf.f * cf.psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::interaction_matrix;

    #[test]
    fn matches_interaction_matrix_at_sqrt_mu() {
        let (p, q) = sqrt_mu_point(4, 2.0);
        let a = interaction_matrix(&p, &q).unwrap();
        assert!(a.max_abs_diff(&mu_matrix(4, 2.0, None).unwrap()) < 1e-13);
        let chk = checked_interaction_matrix(&p, &q).unwrap();
        assert!(chk.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn singular_at_minus_one() {
        let a = mu_matrix(4, -1.0, None).unwrap();
        let d = determinant(&a).unwrap();
        assert!(d.norm() < 1e-12 * a.frobenius_norm().powi(5));
    }

    #[test]
    fn second_derivative_matrix_matches_difference() {
        let q: Vec<C64> = base_point(4).iter().enumerate().map(|(k, z)| z + C64::new(0.01 * k as f64, -0.02)).collect();
        for (i, j) in [(0, 4), (1, 2), (3, 3)] {
            let fd = derivative(
                |t| {
                    let mut qq = q.clone();
                    qq[j] += t;
                    mu_matrix_dq(4, 2.0, &qq, i)
                },
                STEP,
            );
            assert!(fd.max_abs_diff(&mu_matrix_dq2(4, 2.0, &q, i, j)) < 1e-7, "({i},{j})");
        }
    }

    #[test]
    fn p_slope_rejects_nonpositive_mu() {
        assert!(matches!(p_slope(4, -1.0), Err(Error::Argument(_))));
        assert!(matches!(p_slope(4, 1.0), Err(Error::ExcludedMu(_))));
    }

    #[test]
    fn mixed_second_derivative_at_minus_one() {
        for m in [4, 7] {
            let d = mixed_second_derivative(m, -1.0).unwrap();
            let expect = (m * (m - 1)) as f64;
            assert!((d - C64::new(expect, 0.0)).norm() < 1e-8 * expect, "m = {m}: {d}");
        }
        let (a, b) = (mixed_second_derivative(4, 2.0).unwrap(), mixed_second_derivative_fd(4, 2.0).unwrap());
        assert!((a - b).norm() < 1e-6 * a.norm());
    }

    #[test]
    fn gradient_vanishes() {
        for (m, mu) in [(4, 2.0), (6, -1.0)] {
            let g = det_gradient(m, mu).unwrap();
            for (t, f) in g.trace.iter().zip(&g.fd) {
                assert!(t.norm() < 1e-10 * g.scale && f.norm() < 1e-10 * g.scale);
            }
        }
    }

    #[test]
    fn p_slope_trace_matches_difference_and_corrected_form() {
        for (m, mu) in [(4, 2.0), (5, 3.0)] {
            let s = p_slope(m, mu).unwrap();
            let fd = p_slope_fd(m, mu).unwrap();
            let closed = p_slope_closed(m, mu).unwrap();
            assert!((s - fd).norm() < 1e-8 * s.norm());
            assert!((s.re - closed).abs() < 1e-8 * closed.abs() && s.im.abs() < 1e-8 * closed.abs());
        }
        assert!((p_slope_stated(4, 2.0).unwrap() - 7.875).abs() < 1e-9);
    }
}
