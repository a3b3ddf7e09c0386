use serde::{Deserialize, Serialize};

use super::data::EndConfiguration;
use crate::error::{Error, Result};
use crate::linalg::{adjugate, adjugate_column, determinant, relative_rank, ComplexMatrix, C64, RANK_FACTOR};

/// Relative tolerance of the three linear conditions cutting out `W_p`.
pub const W_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Whether `p̄_n` is used as is or replaced by `p_n` in the last row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Variant {
    #[default]
    Standard,
    Checked,
}

impl Variant {
    /// The coefficient standing in for `p̄_j`.
    fn conj_p(self, p: &[C64], j: usize) -> C64 {
        match self {
            Self::Checked if j + 1 == p.len() => p[j],
            _ => p[j].conj(),
        }
    }
}

/// Smallest pairwise distance of the end positions.
pub fn min_separation(q: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for j in 0..q.len() {
        for k in j + 1..q.len() {
            best = best.min((q[j] - q[k]).norm());
        }
    }
    best
}

fn check_positions(p: &[C64], q: &[C64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!("{} normals for {} ends", p.len(), q.len())));
    }
    for j in 0..q.len() {
        for k in j + 1..q.len() {
            if (q[j] - q[k]).norm() <= 1e-10 {
                return Err(Error::CoincidentEnds(j, k));
            }
        }
    }
    Ok(())
}

/// `A_p(q)` with entries `(p̄_j p_k + 1)/(q_j − q_k)` and zero diagonal.
pub fn interaction_matrix(p: &[C64], q: &[C64]) -> Result<ComplexMatrix> {
    interaction_matrix_with(p, q, Variant::Standard)
}

/// `Ǎ_p(q)`: as [`interaction_matrix`] with `p̄_n` replaced by `p_n`.
pub fn checked_interaction_matrix(p: &[C64], q: &[C64]) -> Result<ComplexMatrix> {
    interaction_matrix_with(p, q, Variant::Checked)
}

pub fn interaction_matrix_with(p: &[C64], q: &[C64], variant: Variant) -> Result<ComplexMatrix> {
    check_positions(p, q)?;
    Ok(raw_matrix(p, q, variant))
}

fn raw_matrix(p: &[C64], q: &[C64], variant: Variant) -> ComplexMatrix {
    let n = q.len();
    ComplexMatrix::from_fn(n, n, |j, k| {
        if j == k {
            ZERO
        } else {
            (variant.conj_p(p, j) * p[k] + ONE) / (q[j] - q[k])
        }
    })
}

/// `∂A_p/∂q_j`, exact.
pub fn interaction_matrix_dq(p: &[C64], q: &[C64], j: usize, variant: Variant) -> ComplexMatrix {
    let n = q.len();
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            ZERO
        } else if r == j {
            -(variant.conj_p(p, r) * p[c] + ONE) / ((q[r] - q[c]) * (q[r] - q[c]))
        } else if c == j {
            (variant.conj_p(p, r) * p[c] + ONE) / ((q[r] - q[c]) * (q[r] - q[c]))
        } else {
            ZERO
        }
    })
}

/// `∂ det A/∂q_j = Tr(∂A/∂q_j · adj A)` for every `j`.
pub fn det_gradient_q(p: &[C64], q: &[C64], variant: Variant) -> Result<Vec<C64>> {
    let a = interaction_matrix_with(p, q, variant)?;
    let b = adjugate(&a)?;
    Ok((0..q.len()).map(|j| (&interaction_matrix_dq(p, q, j, variant) * &b).trace()).collect())
}

/// `b_p = ` n-th column of `adj A_p`.
pub fn kernel_vector(p: &[C64], q: &[C64]) -> Result<Vec<C64>> {
    kernel_vector_with(p, q, Variant::Standard)
}

pub fn kernel_vector_with(p: &[C64], q: &[C64], variant: Variant) -> Result<Vec<C64>> {
    let a = interaction_matrix_with(p, q, variant)?;
    kernel_of(&a)
}

/// Last adjugate column; errors when the matrix has rank below `n − 1`.
pub(crate) fn kernel_of(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.rows();
    if relative_rank(a, RANK_FACTOR) < n - 1 {
        return Err(Error::DegenerateKernel);
    }
    let b = adjugate_column(a, n - 1)?;
    let bn = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if bn <= RANK_FACTOR * a.frobenius_norm().powi(n as i32 - 1) {
        return Err(Error::DegenerateKernel);
    }
    Ok(b)
}

/// Residuals of the defining system for a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemResiduals {
    /// Identically zero: the implied weights absorb the first equation.
    pub r_y: Vec<C64>,
    pub r_x: Vec<C64>,
    pub a_implied: Vec<C64>,
}

impl SystemResiduals {
    pub fn r_x_norm(&self) -> f64 {
        self.r_x.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|Im a^j|` relative to `max |a^j|`.
    pub fn imaginary_ratio(&self) -> f64 {
        let scale = self.a_implied.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        self.a_implied.iter().map(|x| x.im.abs()).fold(0.0, f64::max) / scale
    }
}

fn implied_weights(p: &[C64], q: &[C64], b: &[C64]) -> Vec<C64> {
    let n = q.len();
    (0..n)
        .map(|j| {
            let s: C64 = (0..n).filter(|&k| k != j).map(|k| b[k] * (p[j] - p[k]) / (q[j] - q[k])).sum();
            b[j] * s
        })
        .collect()
}

/// `r_x[j] = b^j Σ_k b^k (p̄_j p_k + 1)/(q_j − q_k)` and the implied weights.
pub fn system_residuals(config: &EndConfiguration) -> SystemResiduals {
    let (p, q, b) = (&config.p, &config.q, &config.b);
    let n = q.len();
    let a_implied = implied_weights(p, q, b);
    let r_x = (0..n)
        .map(|j| {
            let s: C64 = (0..n).filter(|&k| k != j).map(|k| b[k] * (p[j].conj() * p[k] + ONE) / (q[j] - q[k])).sum();
            b[j] * s
        })
        .collect();
    SystemResiduals { r_y: vec![ZERO; n], r_x, a_implied }
}

/// Residuals of the alternate form of the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternateResiduals {
    pub r_xx: Vec<C64>,
    pub r_yy: Vec<C64>,
    pub r_xxx: Vec<C64>,
}

impl AlternateResiduals {
    pub fn norm(&self) -> f64 {
        self.r_xx.iter().chain(&self.r_yy).map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Alternate residuals built from `γ_j = b^j Σ b^k/(q_j − q_k)` and
/// `δ_j = b^j Σ b^k p_k/(q_j − q_k)`, with real weights `a^j = Re a_implied`:
///
/// `γ − a p̄/N`, `pγ + δ − a(|p|² − 1)/N`, `pδ + a p/N`, where `N = |p|² + 1`.
///
/// With real weights these vanish exactly when `r_x = 0` and the implied
/// weights are real.
pub fn alternate_residuals(config: &EndConfiguration) -> AlternateResiduals {
    let (p, q, b) = (&config.p, &config.q, &config.b);
    let n = q.len();
    let a = implied_weights(p, q, b);
    let mut out = AlternateResiduals { r_xx: Vec::with_capacity(n), r_yy: Vec::with_capacity(n), r_xxx: Vec::with_capacity(n) };
    for j in 0..n {
        let mut gamma = ZERO;
        let mut delta = ZERO;
        for k in (0..n).filter(|&k| k != j) {
            let w = b[k] / (q[j] - q[k]);
            gamma += w;
            delta += w * p[k];
        }
        gamma *= b[j];
        delta *= b[j];
        let aj = a[j].re;
        let norm = p[j].norm_sqr() + 1.0;
        out.r_xx.push(gamma - p[j].conj() * (aj / norm));
        out.r_yy.push(p[j] * gamma + delta - C64::new(aj * (p[j].norm_sqr() - 1.0) / norm, 0.0));
        out.r_xxx.push(p[j] * delta + p[j] * (aj / norm));
    }
    out
}

/// `Δ(q) = Π_{j>k} (q_j − q_k)`.
pub fn difference_product(q: &[C64]) -> C64 {
    let mut d = ONE;
    for j in 0..q.len() {
        for k in 0..j {
            d *= q[j] - q[k];
        }
    }
    d
}

/// Value of the flux map at `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxMapValue {
    pub f: Vec<C64>,
    /// `det(Δ·A_p) = Δⁿ det A_p`.
    pub lambda: C64,
    pub delta: C64,
    pub on_w: bool,
    /// Largest relative violation of the three `W_p` conditions.
    pub w_residual: f64,
    pub b: Vec<C64>,
}

/// `f^j = b^j Σ_k b^k (p_j − p_k)/(q_j − q_k)` with `b` the kernel vector.
pub fn flux_map(p: &[C64], q: &[C64]) -> Result<FluxMapValue> {
    flux_map_with(p, q, Variant::Standard)
}

pub fn flux_map_with(p: &[C64], q: &[C64], variant: Variant) -> Result<FluxMapValue> {
    let a = interaction_matrix_with(p, q, variant)?;
    let b = kernel_of(&a)?;
    let f = implied_weights(p, q, &b);
    let delta = difference_product(q);
    let lambda = delta.powi(q.len() as i32) * determinant(&a)?;
    let w_residual = w_conditions(p, &f, variant);
    Ok(FluxMapValue { on_w: w_residual <= W_TOL, w_residual, f, lambda, delta, b })
}

/// Flux map components without rank checks; used inside difference stencils.
pub fn flux_values(p: &[C64], q: &[C64], variant: Variant) -> Vec<C64> {
    let a = raw_matrix(p, q, variant);
    let b = adjugate_column(&a, q.len() - 1).expect("square matrix of size >= 2");
    implied_weights(p, q, &b)
}

/// Largest of the three `W_p` conditions on `f`, each relative to its
/// absolute-value sum.
pub fn w_conditions(p: &[C64], f: &[C64], variant: Variant) -> f64 {
    let mut worst: f64 = 0.0;
    for which in 0..3 {
        let mut sum = ZERO;
        let mut mass = 0.0;
        for (j, (&pj, &fj)) in p.iter().zip(f).enumerate() {
            let pbar = variant.conj_p(p, j);
            let norm = pbar * pj + ONE;
            let c = match which {
                0 => (pbar * pj - ONE) / norm,
                1 => pbar / norm,
                _ => pj / norm,
            };
            sum += c * fj;
            mass += (c * fj).norm();
        }
        if mass > 0.0 {
            worst = worst.max(sum.norm() / mass);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_end_matrix() {
        let a = interaction_matrix(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((a[(0, 1)] - c(-3.0, 0.0)).norm() < 1e-15);
        assert!((a[(1, 0)] - c(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(a[(0, 0)], ZERO);
    }

    #[test]
    fn checked_variant_uses_p_n() {
        let p = [c(1.0, 0.0), c(0.0, 1.0)];
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let chk = checked_interaction_matrix(&p, &q).unwrap();
        let std = interaction_matrix(&p, &q).unwrap();
        assert!((chk[(1, 0)] - c(1.0, 1.0)).norm() < 1e-15);
        assert!((std[(1, 0)] - c(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn numerator_cancellation_gives_zero_matrix() {
        // p̄_j p_k = −1 for j ≠ k: p = (i, −i)
        let p = [c(0.0, 1.0), c(0.0, -1.0)];
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!(interaction_matrix(&p, &q).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn coincident_positions_rejected() {
        let p = [c(1.0, 0.0); 3];
        let q = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(interaction_matrix(&p, &q), Err(Error::CoincidentEnds(1, 2)));
    }

    #[test]
    fn zero_coefficients_give_zero_residuals() {
        let cfg = EndConfiguration::new(vec![c(1.0, 0.5), c(-1.0, 0.0), c(0.3, 2.0)], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], vec![ZERO; 3]).unwrap();
        let r = system_residuals(&cfg);
        assert!(r.r_x.iter().chain(&r.a_implied).all(|x| *x == ZERO));
        let alt = alternate_residuals(&cfg);
        assert_eq!(alt.norm(), 0.0);
    }

    #[test]
    fn derivative_matrix_matches_difference() {
        let p = [c(0.5, 1.0), c(-1.0, 0.2), c(2.0, 0.0), c(0.0, -0.7)];
        let q = [c(1.0, 0.0), c(0.0, 1.5), c(-1.0, -0.5), c(0.3, 0.2)];
        for j in 0..4 {
            let d = crate::diff::derivative(
                |t| {
                    let mut qq = q;
                    qq[j] += t;
                    interaction_matrix(&p, &qq).unwrap()
                },
                crate::diff::STEP,
            );
            assert!(d.max_abs_diff(&interaction_matrix_dq(&p, &q, j, Variant::Standard)) < 1e-8);
        }
    }

    #[test]
    fn difference_product_of_three_points() {
        let q = [c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
        // (1−0)(3−0)(3−1) = 6
        assert!((difference_product(&q) - c(6.0, 0.0)).norm() < 1e-15);
    }
}
