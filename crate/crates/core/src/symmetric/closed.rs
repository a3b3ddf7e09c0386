//! Closed forms at the symmetric point `q⁰`.
//!
//! Index convention: everything here is 0-based, so `ζ^{k−1}` for
//! ring end `k` is `zeta_pow(m, k)` and the central end has index `m`.

use serde::{Deserialize, Serialize};

use super::family::{base_point, zeta_pow};
use super::matrix::mu_matrix;
use crate::error::{Error, Result};
use crate::linalg::{adjugate, ComplexMatrix, C64};

const ONE: C64 = C64::new(1.0, 0.0);

/// Scalars attached to `A(q⁰, μ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub m: usize,
    pub mu: f64,
    pub phi: f64,
    pub psi: f64,
    /// `ψ_1, …, ψ_m`; eigenvalues of `C₁A⁰`.
    pub psi_ell: Vec<f64>,
    /// `adj A(q⁰, μ)` entry `(1, 1)`.
    pub f: f64,
    /// `(−1)^{m−1} Π ψ_ℓ / (φψ)`, when `φψ ≠ 0`.
    pub f_product: Option<f64>,
}

/// `ψ_ℓ(μ)` for `ℓ = 1..m`.
pub fn psi_ell(m: usize, mu: f64) -> Vec<f64> {
    let mf = m as f64;
    let mut out: Vec<f64> = (1..m).map(|l| (l as f64 - (mf - 1.0) / 2.0) * mu + l as f64 - (mf + 1.0) / 2.0).collect();
    out.push(-(mf - 1.0) * (mu - 1.0) / 2.0);
    out
}

/// `χ_ℓ(μ)` for `ℓ = 1..m`; `χ_m = 0`.
pub fn chi_closed(m: usize, mu: f64) -> Vec<f64> {
    let mf = m as f64;
    let psi = psi_ell(m, mu);
    let mut out: Vec<f64> = (1..m)
        .map(|l| {
            let l_f = l as f64;
            -(mu + 1.0) * ((mf - 1.0) * mu + mf + 1.0) * (l_f - 1.0) * (l_f - mf + 1.0) / (4.0 * psi[l - 1])
        })
        .collect();
    out.push(0.0);
    out
}

impl ClosedForm {
    pub fn new(m: usize, mu: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::Argument(format!("m must be at least 3, got {m}")));
        }
        let mf = m as f64;
        let phi = (mf - 1.0) * (mu - 1.0) / 2.0;
        let psi = (2.0 * mu - (mf - 1.0) * (mu + 1.0)) / 2.0;
        let psi_ell = psi_ell(m, mu);
        let b = adjugate(&mu_matrix(m, mu, None)?)?;
        let f = b[(0, 0)].re;
        let denom = phi * psi;
        let f_product = (denom != 0.0).then(|| {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            sign * psi_ell.iter().product::<f64>() / denom
        });
        Ok(Self { m, mu, phi, psi, psi_ell, f, f_product })
    }

    /// Rows `(1, …, 1, ψ)`, last row `(φ, …, φ, φψ)`.
    pub fn s_matrix(&self) -> ComplexMatrix {
        let m = self.m;
        ComplexMatrix::from_fn(m + 1, m + 1, |i, j| {
            let row = if i < m { 1.0 } else { self.phi };
            let col = if j < m { 1.0 } else { self.psi };
            C64::new(row * col, 0.0)
        })
    }

    /// `η₁(k, j)` for 0-based `k < m`, `j ≤ m`.
    pub fn eta1(&self, k: usize, j: usize) -> C64 {
        let m = self.m;
        if j == m {
            zeta_pow(m, j as i64 - k as i64) * self.phi
        } else if j == k {
            C64::new(-(m as f64 - 1.0) / 2.0 - self.phi, 0.0)
        } else {
            ONE / (zeta_pow(m, k as i64 - j as i64) - ONE)
        }
    }

    /// `η₂(k, j)` for 0-based ring indices; divides by `μ + 1`.
    pub fn eta2(&self, k: usize, j: usize) -> Result<C64> {
        if self.mu == -1.0 {
            return Err(Error::ExcludedMu("eta2 divides by mu + 1".into()));
        }
        let m = self.m;
        let mf = m as f64;
        let lead = self.psi_ell[0] / (self.mu + 1.0);
        let weight = mf + self.phi;
        if k == j {
            let s: f64 = self.psi_ell[..m - 1].iter().map(|p| 1.0 / p).sum();
            Ok(C64::new(mf * (mf - 1.0) / 2.0 + lead * (mf - 1.0 + weight * s), 0.0))
        } else {
            let d = k as i64 - j as i64;
            let s: C64 = (1..m).map(|l| zeta_pow(m, d * l as i64) / self.psi_ell[l - 1]).sum();
            Ok(C64::new(mf, 0.0) / (zeta_pow(m, d) - ONE) + (s * weight - 1.0) * lead)
        }
    }

    /// `∂β_{k,m+1}/∂q_j` at `q⁰`.
    pub fn beta_derivative(&self, k: usize, j: usize) -> Result<C64> {
        let m = self.m;
        let pre = -zeta_pow(m, -(j as i64)) * (self.f * self.psi);
        let bracket = match (k < m, j < m) {
            (true, true) => ONE - self.eta2(k, j)? / (2.0 * m as f64),
            (false, true) => C64::new(self.phi, 0.0),
            (true, false) => zeta_pow(m, -(k as i64)) * (self.phi / self.psi_ell[m - 2]),
            (false, false) => C64::new(0.0, 0.0),
        };
        Ok(pre * bracket)
    }

    /// `f^k(q⁰, μ)`: `(fψ)²(m−1+φ)` on the ring, `mφ(fψ)²` at the center.
    pub fn flux_values(&self) -> Vec<C64> {
        let m = self.m;
        let s = (self.f * self.psi).powi(2);
        let mut out = vec![C64::new(s * (m as f64 - 1.0 + self.phi), 0.0); m];
        out.push(C64::new(m as f64 * self.phi * s, 0.0));
        out
    }

    /// `∂f^k/∂q_j` at `q⁰`.
    pub fn flux_derivative(&self, k: usize, j: usize) -> Result<C64> {
        let m = self.m;
        let mf = m as f64;
        if j == m {
            return Ok(C64::new(0.0, 0.0));
        }
        let pre = -zeta_pow(m, -(j as i64)) * (self.f * self.psi).powi(2);
        let bracket = if k < m {
            (self.eta1(k, j) * -1.0) + 2.0 * (mf - 1.0 + self.phi) - self.eta2(k, j)? * ((mf - 2.0 + self.phi) / (2.0 * mf))
        } else {
            C64::new((2.0 * mf + 1.0) * self.phi, 0.0)
        };
        Ok(pre * bracket)
    }

    /// `γ_{kj}`, entry of `Γ⁰` for 0-based ring indices.
    pub fn gamma0_entry(&self, k: usize, j: usize) -> Result<C64> {
        let mf = self.m as f64;
        let c = C64::new(-(mf - 1.0 + self.phi) / mf, 0.0);
        Ok(c - self.eta2(k, j)? * ((mf - 2.0 + self.phi) / (2.0 * mf)) - self.eta1(k, j))
    }
}

/// The scalar part of the closed forms.
pub fn closed_form_scalars(m: usize, mu: f64) -> Result<ClosedForm> {
    ClosedForm::new(m, mu)
}

/// Max entrywise `|adj A(q⁰, μ) − f·S|`.
pub fn adjugate_profile_check(m: usize, mu: f64) -> Result<f64> {
    let cf = ClosedForm::new(m, mu)?;
    let b = adjugate(&mu_matrix(m, mu, None)?)?;
    Ok(b.max_abs_diff(&cf.s_matrix().scale(C64::new(cf.f, 0.0))))
}

/// `C₁ = diag(1, ζ, …, ζ^{m−1})`.
pub fn c1_matrix(m: usize) -> ComplexMatrix {
    ComplexMatrix::diag(&base_point(m)[..m])
}

/// `C₂[j, ℓ] = ζ^{jℓ}`, `ℓ = 1..m`; its last column is all ones.
pub fn c2_matrix(m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |j, l| zeta_pow(m, (j * (l + 1)) as i64))
}

/// The ring block `A⁰` of `A(q⁰, μ)`.
pub fn ring_block(m: usize, mu: f64) -> Result<ComplexMatrix> {
    let idx: Vec<usize> = (0..m).collect();
    Ok(mu_matrix(m, mu, None)?.select(&idx, &idx))
}

/// `Y⁰[j, k] = ζ^k Σ_ℓ ζ^{(j−k)ℓ}/ψ_ℓ`.
pub fn y0_matrix(m: usize, mu: f64) -> ComplexMatrix {
    let psi = psi_ell(m, mu);
    ComplexMatrix::from_fn(m, m, |j, k| {
        let s: C64 = (1..=m).map(|l| zeta_pow(m, (j as i64 - k as i64) * l as i64) / psi[l - 1]).sum();
        zeta_pow(m, k as i64) * s
    })
}
