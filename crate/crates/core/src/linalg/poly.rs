//! Dense complex polynomials and Sylvester resultants.

use serde::{Deserialize, Serialize};

use super::dense::determinant;
use super::eigen::eigenvalues;
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Polynomial with ascending coefficients. The zero polynomial has no
/// coefficients and degree −1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<C64>,
}

impl ComplexPolynomial {
    /// Drops exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial `Π (z − r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Self::constant(C64::new(1.0, 0.0)), |acc, &r| acc.mul_linear(r))
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Roots as eigenvalues of the companion matrix.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let d = self.degree();
        if d < 0 {
            return Err(Error::Argument("the zero polynomial has no finite root set".into()));
        }
        let d = d as usize;
        if d == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let companion = ComplexMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -self.coeffs[i] / lead
            } else if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        eigenvalues(&companion)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// `self · (z − r)`.
    pub fn mul_linear(&self, r: C64) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * r;
        }
        Self::new(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[C64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        Self::new((0..len).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect())
    }

    /// Drops leading coefficients below `rel · max|c_k|`, which removes
    /// round-off residue from cancelling sums.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= rel * scale) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Sylvester matrix of `f` (degree `d`) and `g` (degree `e`), size `d + e`.
pub fn sylvester_matrix(f: &ComplexPolynomial, g: &ComplexPolynomial) -> ComplexMatrix {
    let d = f.degree().max(0) as usize;
    let e = g.degree().max(0) as usize;
    let size = d + e;
    let mut s = ComplexMatrix::zeros(size, size);
    for row in 0..e {
        for (k, &c) in f.coefficients().iter().rev().enumerate() {
            s[(row, row + k)] = c;
        }
    }
    for row in 0..d {
        for (k, &c) in g.coefficients().iter().rev().enumerate() {
            s[(e + row, row + k)] = c;
        }
    }
    s
}

/// Resultant `Res(f, g)`; zero iff the polynomials share a root.
pub fn resultant(f: &ComplexPolynomial, g: &ComplexPolynomial) -> Result<C64> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::Argument("resultant of two zero polynomials".into())),
        (true, false) | (false, true) => return Ok(ZERO),
        _ => {}
    }
    let (d, e) = (f.degree(), g.degree());
    if d == 0 {
        return Ok(f.leading().powi(e as i32));
    }
    if e == 0 {
        return Ok(g.leading().powi(d as i32));
    }
    determinant(&sylvester_matrix(f, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn degree_bookkeeping() {
        assert_eq!(ComplexPolynomial::zero().degree(), -1);
        assert_eq!(ComplexPolynomial::new(vec![c(1.0), ZERO, ZERO]).degree(), 0);
        assert_eq!(ComplexPolynomial::from_roots(&[c(1.0), c(2.0)]).degree(), 2);
    }

    #[test]
    fn horner_matches_roots() {
        let p = ComplexPolynomial::from_roots(&[c(1.0), C64::new(0.0, 2.0)]);
        assert!(p.eval(c(1.0)).norm() < 1e-15);
        assert!(p.eval(C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((p.eval(c(0.0)) - C64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn distinct_linear_factors() {
        let f = ComplexPolynomial::new(vec![c(-1.0), c(1.0)]);
        let g = ComplexPolynomial::new(vec![c(1.0), c(1.0)]);
        assert!((resultant(&f, &g).unwrap() - c(2.0)).norm() < 1e-15);
        assert!(resultant(&f, &f).unwrap().norm() < 1e-15);
    }

    #[test]
    fn square_against_difference_of_squares() {
        let f = ComplexPolynomial::new(vec![ZERO, ZERO, c(1.0)]);
        let g = ComplexPolynomial::new(vec![c(-1.0), ZERO, c(1.0)]);
        assert!((resultant(&f, &g).unwrap() - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_inputs() {
        let z = ComplexPolynomial::zero();
        assert!(resultant(&z, &z).is_err());
        assert_eq!(resultant(&z, &ComplexPolynomial::constant(c(3.0))).unwrap(), ZERO);
    }

    #[test]
    fn constant_power() {
        let f = ComplexPolynomial::constant(c(2.0));
        let g = ComplexPolynomial::from_roots(&[c(1.0), c(5.0), c(-3.0)]);
        assert!((resultant(&f, &g).unwrap() - c(8.0)).norm() < 1e-14);
    }

    #[test]
    fn trimming_removes_tiny_leading_terms() {
        let p = ComplexPolynomial::new(vec![c(1.0), c(2.0), c(1e-17)]);
        assert_eq!(p.trim_relative(1e-12).degree(), 1);
    }

    #[test]
    fn roots_recover_factors() {
        let r = [C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, -3.0)];
        let p = ComplexPolynomial::from_roots(&r).scale(C64::new(2.0, 1.0));
        assert!(crate::linalg::set_distance(&p.roots().unwrap(), &r) < 1e-10);
    }
}
