use serde::{Deserialize, Serialize};

use super::data::EndConfiguration;
use super::spinor::spinor_data;
use super::system::{
    det_gradient_q, difference_product, flux_values, interaction_matrix_dq, interaction_matrix_with, kernel_of,
    min_separation, Variant,
};
use crate::diff::{derivative, STEP};
use crate::error::{Error, Result};
use crate::linalg::{adjugate_column, determinant, relative_rank, singular_values, ComplexMatrix, C64, RANK_FACTOR};

/// Relative tolerance for "does not vanish" decisions.
const NONZERO_TOL: f64 = 1e-8;

/// Absolute-value scale of the flux map: `max_j |b^j| Σ_k |b^k| |p_j − p_k| / |q_j − q_k|`.
fn flux_scale(p: &[C64], q: &[C64], b: &[C64]) -> f64 {
    let n = q.len();
    (0..n)
        .map(|j| b[j].norm() * (0..n).filter(|&k| k != j).map(|k| b[k].norm() * (p[j] - p[k]).norm() / (q[j] - q[k]).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Natural size of `∂det A/∂q_j`: `max_j ‖∂A/∂q_j‖ · ‖A‖^{n−1}`.
fn det_slope_scale(p: &[C64], q: &[C64], variant: Variant, a: &ComplexMatrix) -> f64 {
    let n = q.len();
    let da = (0..n).map(|j| interaction_matrix_dq(p, q, j, variant).frobenius_norm()).fold(0.0, f64::max);
    da * a.frobenius_norm().powi(n as i32 - 1)
}

/// Scale against which entries of `J_p` are judged to vanish: product of the
/// determinant-slope, flux and flux-slope scales.
pub fn jacobian_scale(p: &[C64], q: &[C64], variant: Variant) -> Result<f64> {
    let a = interaction_matrix_with(p, q, variant)?;
    let b = adjugate_column(&a, q.len() - 1)?;
    let fs = flux_scale(p, q, &b);
    Ok(det_slope_scale(p, q, variant, &a) * fs * fs / min_separation(q))
}

/// The `(n−1)`-matrix `J_p` in its direct form
/// `D_n (∂_j f^k f^n − f^k ∂_j f^n) − D_j (∂_n f^k f^n − f^k ∂_n f^n)`,
/// with `D_j = ∂ det A_p/∂q_j` and flux partials by central differences.
pub fn flux_jacobian(p: &[C64], q: &[C64], variant: Variant) -> Result<ComplexMatrix> {
    let n = q.len();
    if n < 2 {
        return Err(Error::Argument("flux Jacobian needs at least two ends".into()));
    }
    let a = interaction_matrix_with(p, q, variant)?;
    let b = adjugate_column(&a, n - 1)?;
    let f = flux_values(p, q, variant);
    if f[n - 1].norm() <= 1e-10 * flux_scale(p, q, &b) {
        return Err(Error::ChartFailure);
    }
    let d = det_gradient_q(p, q, variant)?;
    let df: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            derivative(
                |t| {
                    let mut qq = q.to_vec();
                    qq[j] += t;
                    flux_values(p, &qq, variant)
                },
                STEP,
            )
        })
        .collect();
    let last = n - 1;
    Ok(ComplexMatrix::from_fn(n - 1, n - 1, |k, j| {
        d[last] * (df[j][k] * f[last] - f[k] * df[j][last]) - d[j] * (df[last][k] * f[last] - f[k] * df[last][last])
    }))
}

/// Rank of `J` with an absolute floor: a matrix whose largest singular value
/// is below `1e−7·scale` counts as zero.
fn jacobian_rank(j: &ComplexMatrix, scale: f64) -> usize {
    let s = singular_values(j);
    if s.first().copied().unwrap_or(0.0) <= 1e-7 * scale {
        return 0;
    }
    relative_rank(j, RANK_FACTOR)
}

/// Numerical rank of `J_p` at `(p, q)`, zero when `J_p` is negligible against its natural scale.
pub fn flux_jacobian_rank(p: &[C64], q: &[C64], variant: Variant) -> Result<usize> {
    let j = flux_jacobian(p, q, variant)?;
    Ok(jacobian_rank(&j, jacobian_scale(p, q, variant)?))
}

/// Pointwise evaluation of the seven regularity conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    /// (1) end positions pairwise distinct.
    pub distinct: bool,
    /// (2) `rank A = n − 1`.
    pub kernel_rank: bool,
    /// (3) `∂ det A/∂q_n ≠ 0`.
    pub det_slope: bool,
    /// (4) `rank J = n − 4`, attained on the chosen columns.
    pub jacobian_rank: bool,
    /// (5) `P`, `Q` coprime with maximal degree `n − 1`.
    pub unbranched: bool,
    /// (6) every `f^j ≠ 0`.
    pub nonzero_flux: bool,
    /// (7) `q_j ≠ 0` for `j < n`.
    pub nonzero_positions: bool,
    pub jacobian_rank_value: usize,
    pub columns: Vec<usize>,
    pub rows: Vec<usize>,
    /// `Δ² · ∂_n det A · det S · Res(P, Q) · Π f^j · Π_{k<n} q_k`.
    pub product: C64,
    pub passed: bool,
}

impl GenericityCertificate {
    pub fn flags(&self) -> [(&'static str, bool); 7] {
        [
            ("distinct", self.distinct),
            ("kernel-rank", self.kernel_rank),
            ("det-slope", self.det_slope),
            ("jacobian-rank", self.jacobian_rank),
            ("unbranched", self.unbranched),
            ("nonzero-flux", self.nonzero_flux),
            ("nonzero-positions", self.nonzero_positions),
        ]
    }

    /// Names of the failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        self.flags().into_iter().filter(|(_, ok)| !ok).map(|(name, _)| name).collect()
    }

    fn failed_distinct() -> Self {
        Self {
            distinct: false,
            kernel_rank: false,
            det_slope: false,
            jacobian_rank: false,
            unbranched: false,
            nonzero_flux: false,
            nonzero_positions: false,
            jacobian_rank_value: 0,
            columns: Vec::new(),
            rows: Vec::new(),
            product: C64::new(0.0, 0.0),
            passed: false,
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Row subset maximizing `|det|` of the square submatrix on `columns`.
fn best_rows(j: &ComplexMatrix, columns: &[usize]) -> (Vec<usize>, C64) {
    let k = columns.len();
    if k == 0 {
        return (Vec::new(), C64::new(1.0, 0.0));
    }
    subsets(j.rows(), k)
        .into_iter()
        .map(|rows| {
            let d = determinant(&j.select(&rows, columns)).unwrap_or_default();
            (rows, d)
        })
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .unwrap_or_default()
}

/// Column subset of size `n − 4` (and matching rows) maximizing `|det S|`.
pub fn best_columns(j: &ComplexMatrix, size: usize) -> (Vec<usize>, Vec<usize>, C64) {
    subsets(j.cols(), size)
        .into_iter()
        .map(|cols| {
            let (rows, d) = best_rows(j, &cols);
            (cols, rows, d)
        })
        .max_by(|a, b| a.2.norm().total_cmp(&b.2.norm()))
        .unwrap_or_default()
}

/// Evaluates conditions (1)–(7) at `(p, q)`. With `columns = None` the
/// `(n−4)`-column subset of `J` is chosen to maximize `|det S|`.
pub fn genericity_certificate(p: &[C64], q: &[C64], columns: Option<&[usize]>, variant: Variant) -> GenericityCertificate {
    let n = q.len();
    let scale_q = q.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let distinct = p.len() == n && n >= 4 && min_separation(q) > 1e-10 * scale_q;
    if !distinct {
        return GenericityCertificate::failed_distinct();
    }
    let a = interaction_matrix_with(p, q, variant).expect("distinct positions");
    let kernel = kernel_of(&a);
    let kernel_rank = kernel.is_ok() && relative_rank(&a, RANK_FACTOR) == n - 1;
    let b = adjugate_column(&a, n - 1).expect("square");
    let d = det_gradient_q(p, q, variant).expect("distinct positions");
    let det_slope = d[n - 1].norm() > NONZERO_TOL * det_slope_scale(p, q, variant, &a);

    let (jacobian_rank, jacobian_rank_value, columns, rows, det_s) = match (flux_jacobian(p, q, variant), jacobian_scale(p, q, variant)) {
        (Ok(j), Ok(scale)) => {
            let rank = jacobian_rank(&j, scale);
            let target = n - 4;
            let (cols, rows, det_s) = match columns {
                Some(c) => {
                    let (rows, det_s) = best_rows(&j, c);
                    (c.to_vec(), rows, det_s)
                }
                None => best_columns(&j, target),
            };
            let sub_rank = if cols.is_empty() { 0 } else { jacobian_rank(&j.select(&rows, &cols), scale) };
            let ok = rank == target && cols.len() == target && sub_rank == target;
            (ok, rank, cols, rows, det_s)
        }
        _ => (false, 0, columns.map(<[usize]>::to_vec).unwrap_or_default(), Vec::new(), C64::new(0.0, 0.0)),
    };

    let config = EndConfiguration { p: p.to_vec(), q: q.to_vec(), b: b.clone() };
    let spinor = spinor_data(&config);
    let unbranched = spinor.as_ref().map(|s| s.is_unbranched()).unwrap_or(false);
    let resultant = spinor.map(|s| s.resultant_pq).unwrap_or_default();

    let f = flux_values(p, q, variant);
    let fs = flux_scale(p, q, &b);
    let nonzero_flux = fs > 0.0 && f.iter().all(|x| x.norm() > NONZERO_TOL * fs);
    let nonzero_positions = q[..n - 1].iter().all(|z| z.norm() > 1e-10 * scale_q);

    let delta = difference_product(q);
    let product = delta * delta * d[n - 1] * det_s * resultant * f.iter().product::<C64>() * q[..n - 1].iter().product::<C64>();
    let flags = [distinct, kernel_rank, det_slope, jacobian_rank, unbranched, nonzero_flux, nonzero_positions];
    let passed = flags.iter().all(|&x| x) && product.norm() > 0.0 && product.is_finite();
    GenericityCertificate {
        distinct,
        kernel_rank,
        det_slope,
        jacobian_rank,
        unbranched,
        nonzero_flux,
        nonzero_positions,
        jacobian_rank_value,
        columns,
        rows,
        product,
        passed,
    }
}
