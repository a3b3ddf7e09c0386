//! Derivatives of cofactor matrices along curves, including at singular points.

use crate::diff::{derivative, STEP};
use crate::error::{Error, HypothesisFailure, Result};
use crate::linalg::{adjugate, determinant, ComplexMatrix, C64};

/// Relative tolerance for the singular-point hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-8;

/// A smooth one-parameter family of square matrices `q ↦ A(q)`.
pub trait MatrixCurve: Sync {
    fn size(&self) -> usize;
    fn evaluate(&self, q: C64) -> ComplexMatrix;
}

/// Adapts a closure into a [`MatrixCurve`].
pub struct FnCurve<F> {
    n: usize,
    f: F,
}

impl<F> FnCurve<F>
where
    F: Fn(C64) -> ComplexMatrix + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> MatrixCurve for FnCurve<F>
where
    F: Fn(C64) -> ComplexMatrix + Sync,
{
    fn size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, q: C64) -> ComplexMatrix {
        (self.f)(q)
    }
}

/// Everything the singular-point formula needs at `q = 0`.
#[derive(Debug, Clone)]
pub struct SingularPointData {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub x: ComplexMatrix,
    pub trace_xb: C64,
    /// `∂Y_t/∂t` at `t = 0` with `Y_t = adj(A + tX)`.
    pub yt_slope: ComplexMatrix,
}

impl SingularPointData {
    /// Assembles the data and checks that `A` is singular and `Tr(XB) ≠ 0`.
    pub fn new(a: ComplexMatrix, x: ComplexMatrix) -> Result<Self> {
        let b = adjugate(&a)?;
        let det = determinant(&a)?;
        let det_bound = HYPOTHESIS_TOL * a.frobenius_norm().powi(a.rows() as i32);
        if det.norm() > det_bound {
            return Err(Error::Hypothesis(HypothesisFailure::SingularDeterminant {
                value: det.norm(),
                bound: det_bound,
            }));
        }
        let trace_xb = (&x * &b).trace();
        let trace_bound = HYPOTHESIS_TOL * x.frobenius_norm() * b.frobenius_norm();
        if trace_xb.norm() <= trace_bound {
            return Err(Error::Hypothesis(HypothesisFailure::ProbeTrace {
                value: trace_xb.norm(),
                bound: trace_bound,
            }));
        }
        let yt_slope = adjugate_t_slope(&a, &x)?;
        Ok(Self { a, b, x, trace_xb, yt_slope })
    }
}

/// Linear coefficient in `t` of `adj(A + tX)`.
///
/// Every entry is a polynomial of degree at most `n − 1` in `t`, so sampling at
/// the nodes `t_k = k/n` and differentiating the interpolant at 0 is exact up
/// to round-off.
pub fn adjugate_t_slope(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows() != x.rows() || a.cols() != x.cols() {
        return Err(Error::Dimension("adjugate slope needs square A and X of equal size".into()));
    }
    let n = a.rows();
    let nodes: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
    let mut slope = ComplexMatrix::zeros(n, n);
    for (k, &tk) in nodes.iter().enumerate() {
        let w = lagrange_slope_at_zero(&nodes, k);
        let y = adjugate(&(a + &x.scale(C64::new(tk, 0.0))))?;
        slope = &slope + &y.scale(C64::new(w, 0.0));
    }
    Ok(slope)
}

/// `L_k'(0)` for the Lagrange basis on `nodes`.
fn lagrange_slope_at_zero(nodes: &[f64], k: usize) -> f64 {
    let tk = nodes[k];
    let mut total = 0.0;
    for (i, &ti) in nodes.iter().enumerate() {
        if i == k {
            continue;
        }
        let mut term = 1.0 / (tk - ti);
        for (l, &tl) in nodes.iter().enumerate() {
            if l != k && l != i {
                term *= -tl / (tk - tl);
            }
        }
        total += term;
    }
    total
}

/// `∂B/∂q` at `q = 0` for a curve through a singular matrix.
///
/// Requires `det A(0) = 0`, `d det A/dq (0) = 0` and `Tr(XB) ≠ 0`; then
/// `∂B/∂q = (Tr(A'Y')B − Y'A'B − BA'Y') / Tr(XB)` with `Y'` the `t`-slope of
/// `adj(A + tX)`.
pub fn singular_adjugate_derivative(curve: &dyn MatrixCurve, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let data = SingularPointData::new(curve.evaluate(C64::new(0.0, 0.0)), x.clone())?;
    let da = derivative(|t| curve.evaluate(C64::new(t, 0.0)), STEP);
    // d det A/dq = Tr(A' B), exact given A'
    let slope = (&da * &data.b).trace();
    let n = data.a.rows();
    let slope_bound = HYPOTHESIS_TOL * da.frobenius_norm().max(f64::MIN_POSITIVE) * data.a.frobenius_norm().powi(n as i32 - 1);
    if slope.norm() > slope_bound {
        return Err(Error::Hypothesis(HypothesisFailure::DeterminantSlope { value: slope.norm(), bound: slope_bound }));
    }
    Ok(derivative_from_data(&data, &da))
}

/// The closed-form combination given the singular-point data and `A'`.
pub fn derivative_from_data(data: &SingularPointData, da: &ComplexMatrix) -> ComplexMatrix {
    let yp = &data.yt_slope;
    let ay = da * yp;
    let term1 = data.b.scale(ay.trace());
    let term2 = &(yp * da) * &data.b;
    let term3 = &(&data.b * da) * yp;
    (&(&term1 - &term2) - &term3).scale(C64::new(1.0, 0.0) / data.trace_xb)
}

/// Finite-difference oracle for `d/dq adj(A(q))` at 0.
pub fn fd_adjugate_derivative(curve: &dyn MatrixCurve) -> Result<ComplexMatrix> {
    if curve.size() < 2 {
        return Err(Error::Argument("adjugate needs dimension >= 2".into()));
    }
    Ok(derivative(|t| adjugate(&curve.evaluate(C64::new(t, 0.0))).expect("square curve"), STEP))
}
