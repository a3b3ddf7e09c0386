//! Determinants, LU factorisation and cofactor matrices.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// LU factorisation `P A = L U` with partial pivoting on modulus.
#[derive(Debug, Clone)]
pub struct Lu {
    /// Unit-lower `L` below the diagonal, `U` on and above it.
    packed: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("LU needs a square matrix, got {}x{}", a.rows(), a.cols())));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != k {
                lu.swap_rows(pivot_row, k);
                perm.swap(pivot_row, k);
                sign = -sign;
            }
            let inv = ONE / lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] * inv;
                lu[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { packed: lu, perm, sign, singular })
    }

    pub fn determinant(&self) -> C64 {
        if self.singular {
            return ZERO;
        }
        let n = self.packed.rows();
        (0..n).map(|i| self.packed[(i, i)]).fold(C64::new(self.sign, 0.0), |acc, d| acc * d)
    }

    /// Solves `A x = b`; fails on an exactly singular factorisation.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.packed.rows();
        if b.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for {n}x{n} system", b.len())));
        }
        if self.singular {
            return Err(Error::Argument("matrix is singular".into()));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.packed[(i, k)];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.packed[(i, k)];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= self.packed[(i, i)];
        }
        Ok(x)
    }
}

/// Determinant by LU with partial pivoting; closed forms for n = 1, 2.
pub fn determinant(m: &ComplexMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of {}x{} matrix", m.rows(), m.cols())));
    }
    Ok(match m.rows() {
        0 => ONE,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => Lu::new(m)?.determinant(),
    })
}

/// Inverse via LU. Only used where the matrix is known to be regular.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::new(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut e = vec![ZERO; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = ZERO);
        e[j] = ONE;
        let col = lu.solve(&e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// Cofactor matrix (classical adjoint) `B` with `B A = A B = det(A) I`.
///
/// Every entry is an explicit signed `(n-1)`-minor, so the result is valid
/// for singular `A` as well; no inverse is formed.
pub fn adjugate(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("adjugate of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n < 2 {
        return Err(Error::Argument(format!("adjugate needs dimension >= 2, got {n}")));
    }
    let mut b = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = determinant(&m.minor_matrix(i, j))?;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            // transpose of the cofactor array
            b[(j, i)] = minor * sign;
        }
    }
    Ok(b)
}

/// Single column of the adjugate, `adj(M)[:, col]`, from `n` minors.
pub fn adjugate_column(m: &ComplexMatrix, col: usize) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("adjugate of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n < 2 {
        return Err(Error::Argument(format!("adjugate needs dimension >= 2, got {n}")));
    }
    (0..n)
        .map(|j| {
            let sign = if (col + j) % 2 == 0 { 1.0 } else { -1.0 };
            Ok(determinant(&m.minor_matrix(col, j))? * sign)
        })
        .collect()
}

/// Scale of `det M` for relative comparisons: `max(1, ‖M‖_F)^n`.
pub fn determinant_scale(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm().max(f64::MIN_POSITIVE).powi(m.rows() as i32)
}
