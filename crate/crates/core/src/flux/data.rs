use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// One end: unit limit normal and real weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxEnd {
    pub v: [f64; 3],
    pub a: f64,
}

/// Flux data of an n-end catenoid: normals and weights, balanced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxData {
    pub ends: Vec<FluxEnd>,
}

impl FluxData {
    pub const UNIT_TOL: f64 = 1e-12;
    pub const BALANCE_TOL: f64 = 1e-10;

    /// Validates unit normals, nonzero weights, `n ≥ 3` and balancing.
    pub fn new(ends: Vec<FluxEnd>) -> Result<Self> {
        let data = Self { ends };
        data.validate(Self::UNIT_TOL, Self::BALANCE_TOL)?;
        Ok(data)
    }

    pub fn validate(&self, unit_tol: f64, balance_tol: f64) -> Result<()> {
        if self.ends.len() < 3 {
            return Err(Error::Argument(format!("flux data needs at least 3 ends, got {}", self.ends.len())));
        }
        for (j, e) in self.ends.iter().enumerate() {
            let norm = e.v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > unit_tol {
                return Err(Error::Argument(format!("normal {j} has length {norm}")));
            }
            if e.a == 0.0 || !e.a.is_finite() {
                return Err(Error::Argument(format!("weight {j} must be finite and nonzero")));
            }
        }
        let imbalance = self.imbalance();
        if imbalance > balance_tol * self.weight_mass() {
            return Err(Error::Argument(format!("flux data is not balanced: |Σ a v| = {imbalance:e}")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.ends.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.ends.iter().map(|e| e.a).collect()
    }

    pub fn normals(&self) -> Vec<[f64; 3]> {
        self.ends.iter().map(|e| e.v).collect()
    }

    /// `Σ |a^j|`.
    pub fn weight_mass(&self) -> f64 {
        self.ends.iter().map(|e| e.a.abs()).sum()
    }

    /// `|Σ a^j v_j|`.
    pub fn imbalance(&self) -> f64 {
        let mut s = [0.0; 3];
        for e in &self.ends {
            for (si, vi) in s.iter_mut().zip(e.v) {
                *si += e.a * vi;
            }
        }
        s.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Flux vectors `4π a^j v_j`.
    pub fn flux_vectors(&self) -> Vec<[f64; 3]> {
        let c = 4.0 * std::f64::consts::PI;
        self.ends.iter().map(|e| e.v.map(|x| c * e.a * x)).collect()
    }

    /// Stereographic images of the normals.
    pub fn stereographic_normals(&self) -> Result<Vec<C64>> {
        self.ends.iter().map(|e| stereographic(e.v)).collect()
    }

    /// Orthogonal projection of the weights onto `{a : Σ a^j v_j = 0}`.
    ///
    /// Returns the projected data and the norm of the correction.
    pub fn project_balanced(&self) -> Result<(Self, f64)> {
        let n = self.n();
        // M = V^T is 3 x n; a' = a − Mᵀ (M Mᵀ)⁻¹ M a
        let mut g = [[0.0f64; 3]; 3];
        let mut ma = [0.0f64; 3];
        for e in &self.ends {
            for r in 0..3 {
                ma[r] += e.v[r] * e.a;
                for c in 0..3 {
                    g[r][c] += e.v[r] * e.v[c];
                }
            }
        }
        let y = solve3(g, ma).ok_or_else(|| Error::Argument("normals do not span space; projection undefined".into()))?;
        let mut ends = self.ends.clone();
        let mut correction = 0.0;
        for e in ends.iter_mut() {
            let d: f64 = (0..3).map(|r| e.v[r] * y[r]).sum();
            e.a -= d;
            correction += d * d;
        }
        debug_assert_eq!(ends.len(), n);
        Ok((Self { ends }, correction.sqrt()))
    }
}

fn solve3(g: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(g);
    let scale = g.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max).powi(3);
    if d.abs() <= 1e-12 * scale {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut m = g;
        for r in 0..3 {
            m[r][c] = rhs[r];
        }
        *o = det(m) / d;
    }
    Some(out)
}

/// Ends, normals and kernel coefficients `(p, q, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndConfiguration {
    pub p: Vec<C64>,
    pub q: Vec<C64>,
    pub b: Vec<C64>,
}

impl EndConfiguration {
    pub fn new(p: Vec<C64>, q: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        if p.len() != q.len() || q.len() != b.len() {
            return Err(Error::Dimension(format!("p, q, b lengths {}, {}, {}", p.len(), q.len(), b.len())));
        }
        Ok(Self { p, q, b })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `β = Σ b^j`; the surface is unbranched at infinity only if β ≠ 0 in the
    /// setting `p_j = r q_j`.
    pub fn beta(&self) -> C64 {
        self.b.iter().sum()
    }
}

/// `σ(v) = (v¹ + i v²)/(1 − v³)`.
pub fn stereographic(v: [f64; 3]) -> Result<C64> {
    let denom = 1.0 - v[2];
    if denom.abs() < 1e-15 {
        return Err(Error::UnsupportedNormal);
    }
    Ok(C64::new(v[0] / denom, v[1] / denom))
}

/// `σ⁻¹(p) = (2 Re p, 2 Im p, |p|² − 1)/(|p|² + 1)`.
pub fn inverse_stereographic(p: C64) -> [f64; 3] {
    let n = p.norm_sqr();
    let d = n + 1.0;
    [2.0 * p.re / d, 2.0 * p.im / d, (n - 1.0) / d]
}
