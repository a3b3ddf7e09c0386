use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{inverse_stereographic, EndConfiguration, FluxData, FluxEnd};
use crate::linalg::C64;

/// The Z_m-symmetric (m+1)-end family: `m` ends on a ring plus one at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFamily {
    pub m: usize,
    pub r: f64,
    pub zeta: C64,
    pub q0: Vec<C64>,
}

/// `ζ = exp(2πi/m)`.
pub fn zeta(m: usize) -> C64 {
    C64::from_polar(1.0, std::f64::consts::TAU / m as f64)
}

/// `ζ^k` for any integer `k`, reduced mod `m` so that powers stay exact on the circle.
pub fn zeta_pow(m: usize, k: i64) -> C64 {
    let k = k.rem_euclid(m as i64);
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64)
}

/// `q⁰ = (1, ζ, …, ζ^{m−1}, 0)`.
pub fn base_point(m: usize) -> Vec<C64> {
    let mut q: Vec<C64> = (0..m as i64).map(|k| zeta_pow(m, k)).collect();
    q.push(C64::new(0.0, 0.0));
    q
}

impl SymmetricFamily {
    pub fn new(m: usize, r: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::Argument(format!("symmetric family needs m >= 3, got {m}")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Argument(format!("radius must be positive, got {r}")));
        }
        if r == 1.0 {
            return Err(Error::DegenerateFamily("r = 1 makes the central weight vanish".into()));
        }
        Ok(Self { m, r, zeta: zeta(m), q0: base_point(m) })
    }

    pub fn n(&self) -> usize {
        self.m + 1
    }

    /// `p_j = r ζ^{j−1}`, `p_{m+1} = 0`.
    pub fn p(&self) -> Vec<C64> {
        self.q0.iter().map(|z| z * self.r).collect()
    }

    /// `b^j = 1`, `b^{m+1} = (m−1)(r² − 1)/2`.
    pub fn b(&self) -> Vec<C64> {
        let mut b = vec![C64::new(1.0, 0.0); self.m];
        b.push(C64::new((self.m as f64 - 1.0) * (self.r * self.r - 1.0) / 2.0, 0.0));
        b
    }

    /// `a^j = (m−1)/2·r(r² + 1)`, `a^{m+1} = m(m−1)/2·r(r² − 1)`.
    pub fn weights(&self) -> Vec<f64> {
        let (m, r) = (self.m as f64, self.r);
        let mut a = vec![(m - 1.0) / 2.0 * r * (r * r + 1.0); self.m];
        a.push(m * (m - 1.0) / 2.0 * r * (r * r - 1.0));
        a
    }

    pub fn configuration(&self) -> EndConfiguration {
        EndConfiguration { p: self.p(), q: self.q0.clone(), b: self.b() }
    }

    pub fn flux_data(&self) -> FluxData {
        let ends = self.p().into_iter().zip(self.weights()).map(|(p, a)| FluxEnd { v: inverse_stereographic(p), a }).collect();
        FluxData { ends }
    }
}

/// The explicit configuration and flux data of the symmetric family.
pub fn symmetric_configuration(m: usize, r: f64) -> Result<(EndConfiguration, FluxData)> {
    let fam = SymmetricFamily::new(m, r)?;
    Ok((fam.configuration(), fam.flux_data()))
}
