//! Central finite differences and convergence-order estimation.

use crate::error::Result;

/// Second-order central first derivative.
pub fn central_d1<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Second-order central second derivative.
pub fn central_d2<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h))
}

/// Richardson-extrapolated first derivative from h and h/2 stencils (O(h^4)).
pub fn richardson_d1<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64) -> Result<f64> {
    let d_h = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d_h2 = (f(x + h / 2.0)? - f(x - h / 2.0)?) / h;
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

/// Observed convergence order from errors at h and h/2: log2(e1/e2).
pub fn observed_order(err_h: f64, err_h2: f64) -> f64 {
    (err_h.abs().max(1e-300) / err_h2.abs().max(1e-300)).log2()
}
