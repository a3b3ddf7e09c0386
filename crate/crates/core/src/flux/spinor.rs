use serde::{Deserialize, Serialize};

use super::data::EndConfiguration;
use crate::error::{Error, Result};
use crate::linalg::{resultant, ComplexPolynomial, C64};

/// Trapezoid nodes on each residue contour.
pub const RESIDUE_NODES: usize = 1024;

/// Normalized resultant below which `P` and `Q` are treated as sharing a root.
pub const BRANCH_TOL: f64 = 1e-10;

/// Leading coefficients below this fraction of the largest are round-off.
const TRIM: f64 = 1e-11;

/// Spinor polynomials `Q = Σ b^j R/(z − q_j)`, `P = Σ p_j b^j R/(z − q_j)`,
/// `R = Π (z − q_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorData {
    pub p_poly: ComplexPolynomial,
    pub q_poly: ComplexPolynomial,
    pub r_poly: ComplexPolynomial,
    pub resultant_pq: C64,
    /// `|Res(P, Q)|` divided by its Hadamard bound `‖P‖^{deg Q} ‖Q‖^{deg P}`.
    pub normalized_resultant: f64,
    pub max_degree: isize,
    pub poles: Vec<C64>,
}

impl SpinorData {
    pub fn n(&self) -> usize {
        self.poles.len()
    }

    /// `P`, `Q` coprime and one of them of degree `n − 1`.
    pub fn is_unbranched(&self) -> bool {
        self.max_degree == self.n() as isize - 1 && self.normalized_resultant > BRANCH_TOL
    }

    /// `(s₁, s₂) = (Q/R, P/R)` at `z`.
    pub fn spinors(&self, z: C64) -> (C64, C64) {
        let r = self.r_poly.eval(z);
        (self.q_poly.eval(z) / r, self.p_poly.eval(z) / r)
    }

    /// The three components of `∂x/dz = ½(s₁² − s₂², i(s₁² + s₂²), 2 s₁ s₂)`.
    pub fn dx(&self, z: C64) -> [C64; 3] {
        let (s1, s2) = self.spinors(z);
        let (a, b) = (s1 * s1, s2 * s2);
        [(a - b) * 0.5, C64::new(0.0, 0.5) * (a + b), s1 * s2]
    }
}

pub fn spinor_data(config: &EndConfiguration) -> Result<SpinorData> {
    let n = config.n();
    if n < 2 {
        return Err(Error::Argument("spinor data needs at least two ends".into()));
    }
    let mut q_poly = ComplexPolynomial::zero();
    let mut p_poly = ComplexPolynomial::zero();
    for j in 0..n {
        let others: Vec<C64> = (0..n).filter(|&k| k != j).map(|k| config.q[k]).collect();
        let basis = ComplexPolynomial::from_roots(&others);
        q_poly = q_poly.add(&basis.scale(config.b[j]));
        p_poly = p_poly.add(&basis.scale(config.p[j] * config.b[j]));
    }
    let q_poly = q_poly.trim_relative(TRIM);
    let p_poly = p_poly.trim_relative(TRIM);
    let r_poly = ComplexPolynomial::from_roots(&config.q);
    let max_degree = p_poly.degree().max(q_poly.degree());
    let (resultant_pq, normalized_resultant) = if p_poly.is_zero() && q_poly.is_zero() {
        (C64::new(0.0, 0.0), 0.0)
    } else {
        let res = resultant(&p_poly, &q_poly)?;
        let norm = |f: &ComplexPolynomial| f.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let bound = norm(&p_poly).powi(q_poly.degree().max(0) as i32) * norm(&q_poly).powi(p_poly.degree().max(0) as i32);
        (res, if bound > 0.0 { res.norm() / bound } else { 0.0 })
    };
    Ok(SpinorData { p_poly, q_poly, r_poly, resultant_pq, normalized_resultant, max_degree, poles: config.q.clone() })
}

/// Real and imaginary parts of the loop integral of `∂x` around one end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndResidue {
    pub monodromy: [f64; 3],
    pub flux: [f64; 3],
}

/// Integrates `∂x` over `|z − q_j| = radius` by the trapezoid rule.
pub fn end_residue(spinor: &SpinorData, j: usize, radius: f64) -> Result<EndResidue> {
    let n = spinor.n();
    if j >= n {
        return Err(Error::Argument(format!("end index {j} out of range for {n} ends")));
    }
    let center = spinor.poles[j];
    let nearest = (0..n).filter(|&k| k != j).map(|k| (spinor.poles[k] - center).norm()).fold(f64::INFINITY, f64::min);
    if !(radius > 0.0 && radius < 0.5 * nearest) {
        return Err(Error::Geometry { end: j, radius });
    }
    let step = std::f64::consts::TAU / RESIDUE_NODES as f64;
    let mut total = [C64::new(0.0, 0.0); 3];
    for k in 0..RESIDUE_NODES {
        let e = C64::from_polar(1.0, step * k as f64);
        let z = center + e * radius;
        let dz = C64::new(0.0, radius * step) * e;
        for (t, v) in total.iter_mut().zip(spinor.dx(z)) {
            *t += v * dz;
        }
    }
    Ok(EndResidue { monodromy: total.map(|c| c.re), flux: total.map(|c| c.im) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_end_hand_expansion() {
        let cfg = EndConfiguration::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0); 2]).unwrap();
        let s = spinor_data(&cfg).unwrap();
        // Q = 2z − 1, P = (z − 1) − z = −1
        assert_eq!(s.q_poly.coefficients(), &[c(-1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(s.p_poly.coefficients(), &[c(-1.0, 0.0)]);
        assert!(s.resultant_pq.norm() > 0.5);
        assert_eq!(s.max_degree, 1);
    }

    #[test]
    fn contour_must_avoid_other_poles() {
        let cfg = EndConfiguration::new(vec![c(1.0, 0.0); 3], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], vec![c(1.0, 0.0); 3]).unwrap();
        let s = spinor_data(&cfg).unwrap();
        assert!(matches!(end_residue(&s, 0, 0.6), Err(Error::Geometry { end: 0, .. })));
        assert!(end_residue(&s, 0, 0.2).is_ok());
    }
}
