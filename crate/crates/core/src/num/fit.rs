//! Offset power-law least squares: I ≈ a + b·U^p with p scanned on a grid.

/// Result of a power fit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub offset: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub sse: f64,
}

/// Solve min_{a,b} Σ (a + b·u_i^p − y_i)² for fixed p.
fn solve_ab(us: &[f64], ys: &[f64], p: f64) -> (f64, f64, f64) {
    let n = us.len() as f64;
    let mut sx = 0.0;
    let mut sxx = 0.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    for (&u, &y) in us.iter().zip(ys) {
        let x = u.powf(p);
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
    }
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return (0.0, 0.0, f64::INFINITY);
    }
    let b = (n * sxy - sx * sy) / det;
    let a = (sy - b * sx) / n;
    let mut sse = 0.0;
    for (&u, &y) in us.iter().zip(ys) {
        let r = a + b * u.powf(p) - y;
        sse += r * r;
    }
    (a, b, sse)
}

/// Scan `p` over `[p_lo, p_hi]` with step `p_step` and return the best fit.
pub fn fit_power_offset(us: &[f64], ys: &[f64], p_lo: f64, p_hi: f64, p_step: f64) -> PowerFit {
    assert!(us.len() == ys.len() && us.len() >= 4);
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let sst: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
    let mut best = PowerFit {
        exponent: p_lo,
        offset: 0.0,
        amplitude: 0.0,
        r_squared: 0.0,
        sse: f64::INFINITY,
    };
    let steps = ((p_hi - p_lo) / p_step).round() as usize;
    for i in 0..=steps {
        let p = p_lo + p_step * i as f64;
        let (a, b, sse) = solve_ab(us, ys, p);
        if sse < best.sse {
            best = PowerFit {
                exponent: p,
                offset: a,
                amplitude: b,
                r_squared: 1.0 - sse / sst.max(1e-300),
                sse,
            };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let us: Vec<f64> = (4..41).map(|k| (k as f64) * (2.0f64).ln()).collect();
        let ys: Vec<f64> = us.iter().map(|u| 3.0 + 0.5 * u.powf(0.6)).collect();
        let fit = fit_power_offset(&us, &ys, 0.05, 1.4, 0.001);
        assert!((fit.exponent - 0.6).abs() < 1e-9);
        assert!((fit.offset - 3.0).abs() < 1e-9);
        assert!((fit.amplitude - 0.5).abs() < 1e-9);
        assert!(fit.r_squared > 0.999_999);
    }

    #[test]
    fn recovers_negative_exponent_limit() {
        let us: Vec<f64> = (4..41)
            .map(|k| 4.0f64.ln() + (k as f64) * (2.0f64).ln())
            .collect();
        let ys: Vec<f64> = us.iter().map(|u| 2.0 - 0.7 * u.powf(-0.2)).collect();
        let fit = fit_power_offset(&us, &ys, -1.4, -0.05, 0.001);
        assert!((fit.exponent + 0.2).abs() < 1e-9);
        assert!((fit.offset - 2.0).abs() < 1e-8);
    }
}
