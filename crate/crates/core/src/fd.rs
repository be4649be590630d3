//! Central finite differences with optional Richardson extrapolation.

use crate::linalg::Vector;

/// `(4·E(h/2) − E(h))/3` when `richardson`, else `E(h)`, for an estimator
/// with an even error expansion in `h`.
pub fn extrapolate<E: Fn(f64) -> Vector>(estimator: E, h: f64, richardson: bool) -> Vector {
    if richardson {
        (estimator(h * 0.5) * 4.0 - estimator(h)) / 3.0
    } else {
        estimator(h)
    }
}

/// `f′(0)` by `(f(h) − f(−h))/(2h)`.
pub fn derivative<F: Fn(f64) -> Vector>(f: F, h: f64, richardson: bool) -> Vector {
    extrapolate(|s| (f(s) - f(-s)) / (2.0 * s), h, richardson)
}

/// `∂²f/∂s∂t (0,0)` by the four-point central stencil.
pub fn mixed_partial<F: Fn(f64, f64) -> Vector>(f: F, h: f64, richardson: bool) -> Vector {
    extrapolate(
        |s| (f(s, s) + f(-s, -s) - f(s, -s) - f(-s, s)) / (4.0 * s * s),
        h,
        richardson,
    )
}
