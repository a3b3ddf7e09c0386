//! One-sided Jacobi SVD, numerical rank and minimum-norm least squares.

use super::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U diag(σ) Vᴴ`, σ sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn new(a: &ComplexMatrix) -> Self {
        if a.rows() < a.cols() {
            let t = Self::tall(&a.adjoint());
            return Self { u: t.v, sigma: t.sigma, v: t.u };
        }
        Self::tall(a)
    }

    fn tall(a: &ComplexMatrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        // work column-major for cache friendliness of the rotations
        let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
        let mut v: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                    let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                    let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                    let g = gamma.norm();
                    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    // rotate the phase out of column q so the pair is real-symmetric
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let xp = cols[p][i];
                        let xq = cols[q][i] * phase.conj();
                        cols[p][i] = xp * c - xq * s;
                        cols[q][i] = xp * s + xq * c;
                    }
                    for i in 0..n {
                        let xp = v[p][i];
                        let xq = v[q][i] * phase.conj();
                        v[p][i] = xp * c - xq * s;
                        v[q][i] = xp * s + xq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut order: Vec<(usize, f64)> =
            cols.iter().map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()).enumerate().collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut u = ComplexMatrix::zeros(m, n);
        let mut vm = ComplexMatrix::zeros(n, n);
        let mut sigma = Vec::with_capacity(n);
        for (k, &(j, s)) in order.iter().enumerate() {
            sigma.push(s);
            for i in 0..m {
                u[(i, k)] = if s > 0.0 { cols[j][i] / s } else { ZERO };
            }
            for i in 0..n {
                vm[(i, k)] = v[j][i];
            }
        }
        Self { u, sigma, v: vm }
    }

    /// Minimum-norm least-squares solution, discarding σ ≤ `rcond`·σ_max.
    pub fn solve(&self, b: &[C64], rcond: f64) -> Vec<C64> {
        let cutoff = rcond * self.sigma.first().copied().unwrap_or(0.0);
        let n = self.v.rows();
        let mut x = vec![ZERO; n];
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= cutoff || s == 0.0 {
                continue;
            }
            let coeff: C64 = (0..self.u.rows()).map(|i| self.u[(i, k)].conj() * b[i]).sum::<C64>() / s;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += self.v[(i, k)] * coeff;
            }
        }
        x
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    Svd::new(a).sigma
}

/// `max(rows, cols) · ε · σ_max`.
pub fn default_rank_tolerance(a: &ComplexMatrix) -> f64 {
    let smax = singular_values(a).first().copied().unwrap_or(0.0);
    a.rows().max(a.cols()) as f64 * f64::EPSILON * smax
}

/// Number of singular values strictly above `tol`.
pub fn numerical_rank(a: &ComplexMatrix, tol: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol).count()
}

/// Rank with threshold `factor · σ_max`.
pub fn relative_rank(a: &ComplexMatrix, factor: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    s.into_iter().filter(|&x| x > factor * smax).count()
}
