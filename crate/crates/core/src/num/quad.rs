//! Adaptive Gauss–Kronrod quadrature (G7/K15 with bisection).

use super::Real;
use crate::error::{Error, Result};

/// K15 abscissae on [0, 1] side (QUADPACK dqk15 constants).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_467,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Integral value with its error estimate and convergence flag.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evals: usize,
}

fn kronrod_panel<T: Real, F: FnMut(T) -> Result<T>>(
    f: &mut F,
    a: T,
    b: T,
) -> Result<(T, T, usize)> {
    let half = (b - a) * T::of(0.5);
    let mid = (a + b) * T::of(0.5);
    let fc = f(mid)?;
    let mut kron = fc * T::of(WGK[7]);
    let mut gauss = fc * T::of(WG[3]);
    let mut evals = 1;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * T::of(x);
        let f1 = f(mid - dx)?;
        let f2 = f(mid + dx)?;
        evals += 2;
        kron = kron + (f1 + f2) * T::of(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * T::of(WG[j / 2]);
        }
    }
    let value = kron * half;
    let err = ((kron - gauss) * half).abs();
    if !(value.is_finite() && err.is_finite()) {
        return Err(Error::Quadrature(format!(
            "non-finite integrand on panel [{:?}, {:?}]: value {:?}, err {:?}",
            a, b, value, err
        )));
    }
    // QUADPACK-style sharpening of the raw difference.
    let err = if err > T::zero() {
        let scaled = (T::of(200.0) * err / value.abs().max(T::of(1e-300))).powf(T::of(1.5));
        if scaled < T::one() {
            err.min(value.abs() * scaled)
        } else {
            err
        }
    } else {
        err
    };
    Ok((value, err, evals))
}

/// Adaptive quadrature of `f` over `[a, b]` to `rel_tol` (with an absolute
/// floor `abs_tol`). Worst-interval-first bisection.
pub fn adaptive<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    a: T,
    b: T,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadratureOutcome> {
    if a == b {
        return Ok(QuadratureOutcome {
            value: 0.0,
            error: 0.0,
            converged: true,
            evals: 0,
        });
    }
    let (v0, e0, n0) = kronrod_panel(&mut f, a, b)?;
    let mut intervals: Vec<(T, T, T, T)> = vec![(a, b, v0, e0)];
    let mut evals = n0;
    loop {
        let total: f64 = intervals
            .iter()
            .fold(0.0, |s, iv| s + iv.2.to_f64().unwrap());
        let err: f64 = intervals
            .iter()
            .fold(0.0, |s, iv| s + iv.3.to_f64().unwrap());
        let target = (rel_tol * total.abs()).max(abs_tol);
        if err <= target {
            return Ok(QuadratureOutcome {
                value: total,
                error: err,
                converged: true,
                evals,
            });
        }
        if intervals.len() >= max_panels {
            return Ok(QuadratureOutcome {
                value: total,
                error: err,
                converged: false,
                evals,
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution; keep its estimate
            let (v, e, n) = kronrod_panel(&mut f, lo, hi)?;
            evals += n;
            intervals.push((lo, hi, v, e * T::of(1e-3)));
            continue;
        }
        let (v1, e1, n1) = kronrod_panel(&mut f, lo, mid)?;
        let (v2, e2, n2) = kronrod_panel(&mut f, mid, hi)?;
        evals += n1 + n2;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// As [`adaptive`] but errors out instead of returning a non-converged flag.
pub fn adaptive_strict<T: Real, F: FnMut(T) -> Result<T>>(
    f: F,
    a: T,
    b: T,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadratureOutcome> {
    let out = adaptive(f, a, b, rel_tol, abs_tol, max_panels)?;
    if !out.converged {
        return Err(Error::Quadrature(format!(
            "adaptive quadrature did not reach tolerance: value {:.6e}, error {:.3e} after {} evals",
            out.value, out.error, out.evals
        )));
    }
    Ok(out)
}
