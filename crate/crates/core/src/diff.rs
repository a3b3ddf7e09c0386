//! Central differences with one level of Richardson extrapolation.

use crate::linalg::{ComplexMatrix, C64};

/// Step used for first derivatives throughout the crate.
pub const STEP: f64 = 1e-5;

/// Step for second (mixed) derivatives, where round-off scales like h⁻².
pub const SECOND_STEP: f64 = 1e-3;

/// Values that can be combined linearly by the difference formulas.
pub trait Differentiable: Sized {
    /// `ca·a + cb·b`.
    fn lincomb(a: &Self, ca: f64, b: &Self, cb: f64) -> Self;
}

impl Differentiable for C64 {
    fn lincomb(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a * ca + b * cb
    }
}

impl Differentiable for Vec<C64> {
    fn lincomb(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
    }
}

impl Differentiable for Vec<f64> {
    fn lincomb(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
    }
}

impl Differentiable for ComplexMatrix {
    fn lincomb(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        &a.scale(C64::new(ca, 0.0)) + &b.scale(C64::new(cb, 0.0))
    }
}

/// `d/dt f(t)` at `t = 0`: `(4 D(h/2) − D(h)) / 3` with `D` the central quotient.
///
/// Along a real step this equals the complex derivative when `f` is
/// holomorphic in the underlying complex coordinate.
pub fn derivative<T: Differentiable>(f: impl Fn(f64) -> T, h: f64) -> T {
    let d = |s: f64| T::lincomb(&f(s), 0.5 / s, &f(-s), -0.5 / s);
    T::lincomb(&d(0.5 * h), 4.0 / 3.0, &d(h), -1.0 / 3.0)
}

/// `∂²f/∂s∂t` at the origin by the four-point cross stencil, Richardson-extrapolated.
pub fn mixed_derivative<T: Differentiable>(f: impl Fn(f64, f64) -> T, h: f64) -> T {
    let d = |s: f64| {
        let w = 0.25 / (s * s);
        let pp = T::lincomb(&f(s, s), w, &f(s, -s), -w);
        let mm = T::lincomb(&f(-s, -s), w, &f(-s, s), -w);
        T::lincomb(&pp, 1.0, &mm, 1.0)
    };
    T::lincomb(&d(0.5 * h), 4.0 / 3.0, &d(h), -1.0 / 3.0)
}
