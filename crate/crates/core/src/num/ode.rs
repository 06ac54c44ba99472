//! Embedded adaptive Runge–Kutta stepping (Cash–Karp 4(5)) for scalar ODEs,
//! recording every accepted node for dense-output construction.

use super::Real;
use crate::error::{Error, Result};

/// Cash–Karp tableau.
const A: [[f64; 5]; 5] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0.0, 0.0],
    [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0.0],
    [
        1631.0 / 55296.0,
        175.0 / 512.0,
        575.0 / 13824.0,
        44275.0 / 110592.0,
        253.0 / 4096.0,
    ],
];
const B5: [f64; 6] = [
    37.0 / 378.0,
    0.0,
    250.0 / 621.0,
    125.0 / 594.0,
    0.0,
    512.0 / 1771.0,
];
const B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

/// Options for [`integrate_scalar`].
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub guard: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: 0.05,
            guard: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

/// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction), returning
/// the accepted nodes `(x_i, y_i)` including both endpoints.
///
/// Errors with `ProfileBlowup` when `|y|` exceeds `opts.guard`.
pub fn integrate_scalar<T: Real, F: Fn(T, T) -> Result<T>>(
    f: F,
    x0: T,
    y0: T,
    x1: T,
    opts: &OdeOptions,
) -> Result<Vec<(T, T)>> {
    let dir = if x1 >= x0 { T::one() } else { -T::one() };
    let span = (x1 - x0).abs();
    let mut h = span.min(T::of(opts.max_step)) * dir * T::of(0.1);
    if h == T::zero() {
        return Ok(vec![(x0, y0), (x1, y0)]);
    }
    let mut x = x0;
    let mut y = y0;
    let mut out = vec![(x, y)];
    let mut k = [T::zero(); 6];
    for _ in 0..opts.max_steps {
        if (x - x1) * dir >= T::zero() {
            return Ok(out);
        }
        if (x + h - x1) * dir > T::zero() {
            h = x1 - x;
        }
        k[0] = f(x, y)?;
        for i in 0..5 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi = yi + *kj * T::of(A[i][j]) * h;
            }
            k[i + 1] = f(x + h * T::of([0.2, 0.3, 0.6, 1.0, 7.0 / 8.0][i]), yi)?;
        }
        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            y5 = y5 + *kj * T::of(B5[j]) * h;
            y4 = y4 + *kj * T::of(B4[j]) * h;
        }
        let sc = T::of(opts.abs_tol) + y.abs().max(y5.abs()) * T::of(opts.rel_tol);
        let err = ((y5 - y4) / sc).abs();
        if err <= T::one() {
            x = x + h;
            y = y5;
            if y.abs() > T::of(opts.guard) {
                return Err(Error::ProfileBlowup(format!(
                    "|y| = {:?} exceeded guard {} at x = {:?}",
                    y, opts.guard, x
                )));
            }
            out.push((x, y));
        }
        // standard step-size controller, order 5
        let fac = T::of(0.9) * err.max(T::of(1e-10)).powf(T::of(-0.2));
        let fac = fac.min(T::of(5.0)).max(T::of(0.2));
        h = (h * fac).abs().min(T::of(opts.max_step)) * dir;
        if h.abs() < T::of(1e-15) * (x.abs() + T::one()) {
            return Err(Error::Ode(format!("step size underflow at x = {:?}", x)));
        }
    }
    Err(Error::Ode("max step count exceeded".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let nodes =
            integrate_scalar(|_, y: f64| Ok(y), 0.0, 1.0, 1.0, &OdeOptions::default()).unwrap();
        let (x, y) = *nodes.last().unwrap();
        assert_eq!(x, 1.0);
        assert!((y - std::f64::consts::E).abs() < 1e-10);
    }

    #[test]
    fn backward_direction() {
        let nodes =
            integrate_scalar(|_, y: f64| Ok(y), 0.0, 1.0, -1.0, &OdeOptions::default()).unwrap();
        let (x, y) = *nodes.last().unwrap();
        assert_eq!(x, -1.0);
        assert!((y - (-1.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn riccati_blowup_detected() {
        // y' = 1 + y^2 blows up at pi/2
        let r = integrate_scalar(
            |_, y: f64| Ok(1.0 + y * y),
            0.0,
            0.0,
            1.6,
            &OdeOptions {
                guard: 8.0,
                ..OdeOptions::default()
            },
        );
        match r {
            Err(Error::ProfileBlowup(_)) => {}
            other => panic!("expected blow-up, got {other:?}"),
        }
    }
}
