use serde::{Deserialize, Serialize};

use super::closed::{c1_matrix, c2_matrix, chi_closed, y0_matrix, ClosedForm};
use super::family::base_point;
use super::matrix::{det_hessian_row, mixed_second_derivative, mu_matrix};
use crate::diff::{derivative, STEP};
use crate::error::{Error, Result};
use crate::linalg::{adjugate_column, eigenvalues, relative_rank, ComplexMatrix, C64, RANK_FACTOR};

/// `Γ_{m+1}(μ)` by two routes, with `Γ⁰`, its eigenvalues and the circulant building blocks.
///
/// Matrices indexed by `(k, j)` carry the flux component `k` in the row and the
/// differentiated position `q_j` in the column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaClosedForm {
    pub scalars: ClosedForm,
    pub s: ComplexMatrix,
    /// `∂²det A/∂q₁∂q_{m+1}` at `(q⁰, μ)`.
    pub mixed: C64,
    /// `η₁(k, j)`, `m × (m+1)`.
    pub eta1: ComplexMatrix,
    /// `η₂(k, j)`, `m × m`.
    pub eta2: ComplexMatrix,
    /// From the closed-form flux derivatives.
    pub gamma: ComplexMatrix,
    /// From finite differences of `f^k/f^{m+1}` and of the determinant gradient.
    pub gamma_numeric: ComplexMatrix,
    /// `(γ_{kj})` from the `η` closed forms.
    pub gamma0: ComplexMatrix,
    /// `−(fψ)⁻² (∂_j f^k − f^k/f^{m+1} ∂_j f^{m+1}) · C₁` from finite differences.
    pub gamma0_numeric: ComplexMatrix,
    /// Eigenvalues of `gamma0_numeric`.
    pub chi: Vec<C64>,
    pub chi_closed: Vec<f64>,
    pub c1: ComplexMatrix,
    pub c2: ComplexMatrix,
    pub y0: ComplexMatrix,
    pub rank: usize,
    /// `max |gamma − gamma_numeric| / max |gamma|`.
    pub agreement: f64,
}

/// `f^k(q, μ)` with `b` the last adjugate column of `A(q, μ)` and ring normals `ζ^{k−1}`.
pub fn mu_flux_values(m: usize, mu: f64, q: &[C64]) -> Result<Vec<C64>> {
    let b = adjugate_column(&mu_matrix(m, mu, Some(q))?, m)?;
    let p = base_point(m);
    Ok((0..=m).map(|k| b[k] * (0..=m).filter(|&j| j != k).map(|j| b[j] * (p[k] - p[j]) / (q[k] - q[j])).sum::<C64>()).collect())
}

fn flux_partials(m: usize, mu: f64) -> Vec<Vec<C64>> {
    let q0 = base_point(m);
    (0..=m)
        .map(|j| {
            derivative(
                |t| {
                    let mut q = q0.clone();
                    q[j] += t;
                    mu_flux_values(m, mu, &q).expect("distinct positions")
                },
                STEP,
            )
        })
        .collect()
}

pub fn gamma_matrix(m: usize, mu: f64) -> Result<GammaClosedForm> {
    if m < 4 {
        return Err(Error::Argument(format!("gamma matrix needs m >= 4, got {m}")));
    }
    if !(mu > 0.0) || mu == 1.0 {
        return Err(Error::ExcludedMu(format!("gamma matrix needs mu > 0, mu != 1, got {mu}")));
    }
    let cf = ClosedForm::new(m, mu)?;
    let mixed = mixed_second_derivative(m, mu)?;
    let hessian = det_hessian_row(m, mu)?;
    let scale = hessian.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if mixed.norm() <= 1e-10 * scale {
        return Err(Error::ExcludedMu(format!("mixed second derivative vanishes at mu = {mu}")));
    }

    let eta1 = ComplexMatrix::from_fn(m, m + 1, |k, j| cf.eta1(k, j));
    let mut eta2 = ComplexMatrix::zeros(m, m);
    let mut df_closed = ComplexMatrix::zeros(m + 1, m + 1);
    let mut gamma0 = ComplexMatrix::zeros(m, m);
    for k in 0..=m {
        for j in 0..=m {
            df_closed[(k, j)] = cf.flux_derivative(k, j)?;
            if k < m && j < m {
                eta2[(k, j)] = cf.eta2(k, j)?;
                gamma0[(k, j)] = cf.gamma0_entry(k, j)?;
            }
        }
    }

    // Closed route: ∂f/∂q_{m+1} = 0 at q⁰, so only the D_{1,m+1} term survives.
    let fv = cf.flux_values();
    let fl = fv[m];
    let gamma = ComplexMatrix::from_fn(m, m, |k, j| mixed * (fl * df_closed[(k, j)] - fv[k] * df_closed[(m, j)]) / (fl * fl));

    // Numeric route, general definition.
    let f_num = mu_flux_values(m, mu, &base_point(m))?;
    let df = flux_partials(m, mu);
    let ratio_slope = |k: usize, j: usize| (df[j][k] * f_num[m] - f_num[k] * df[j][m]) / (f_num[m] * f_num[m]);
    let d_last = hessian[m];
    let gamma_numeric = ComplexMatrix::from_fn(m, m, |k, j| d_last * ratio_slope(k, j) - hessian[j] * ratio_slope(k, m));

    let c1 = c1_matrix(m);
    let norm = C64::new(-1.0 / (cf.f * cf.psi).powi(2), 0.0);
    let inner = ComplexMatrix::from_fn(m, m, |k, j| df[j][k] - f_num[k] / f_num[m] * df[j][m]);
    let gamma0_numeric = (&inner * &c1).scale(norm);
    let chi = eigenvalues(&gamma0_numeric)?;

    let agreement = gamma.max_abs_diff(&gamma_numeric) / gamma.max_abs().max(f64::MIN_POSITIVE);
    let rank = relative_rank(&gamma_numeric, RANK_FACTOR);
    Ok(GammaClosedForm {
        s: cf.s_matrix(),
        mixed,
        eta1,
        eta2,
        gamma,
        gamma_numeric,
        gamma0,
        gamma0_numeric,
        chi,
        chi_closed: chi_closed(m, mu),
        c1,
        c2: c2_matrix(m),
        y0: y0_matrix(m, mu),
        rank,
        agreement,
        scalars: cf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{flux_values, Variant};
    use crate::linalg::set_distance;

    #[test]
    fn four_two() {
        let g = gamma_matrix(4, 2.0).unwrap();
        assert!(g.agreement < 1e-7, "{}", g.agreement);
        assert_eq!(g.rank, 1);
        let chi: Vec<C64> = g.chi_closed.iter().map(|&x| C64::new(x, 0.0)).collect();
        assert!(set_distance(&g.chi, &chi) < 1e-8);
        assert!(g.gamma0.max_abs_diff(&g.gamma0_numeric) < 1e-7);
    }

    #[test]
    fn closed_flux_values_match_direct() {
        let cf = ClosedForm::new(5, 3.0).unwrap();
        let direct = mu_flux_values(5, 3.0, &base_point(5)).unwrap();
        for (a, b) in cf.flux_values().iter().zip(&direct) {
            assert!((a - b).norm() < 1e-9 * b.norm().max(1.0));
        }
    }

    #[test]
    fn sqrt_mu_scaling_is_the_flux_map() {
        // With p = r q⁰ the standard flux map is r times the ring-pattern values.
        let (m, mu) = (4, 3.0_f64);
        let q0 = base_point(m);
        let p: Vec<C64> = q0.iter().map(|z| z * mu.sqrt()).collect();
        let f = flux_values(&p, &q0, Variant::Standard);
        let g = mu_flux_values(m, mu, &q0).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b * mu.sqrt()).norm() < 1e-9 * b.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_excluded_mu() {
        assert!(matches!(gamma_matrix(4, 1.0), Err(Error::ExcludedMu(_))));
        assert!(matches!(gamma_matrix(4, -1.0), Err(Error::ExcludedMu(_))));
    }
}
