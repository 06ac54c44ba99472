//! Wave-coordinate condition residuals (nonlinear, lowered and linearized)
//! and the P(p, k) quadratic form in its two equivalent evaluations.

use crate::error::{Error, Result};
use crate::frame::{frame_to_coord, minkowski_coord, FrameSymTensor2, Variance};
use crate::metric::{ansatz_terms, inverse_metric_frame, metric_partial, metric_terms, FRAME_DIRS};
use crate::profiles::ProfileFamily;
use crate::terms::Dir;
use serde::Serialize;

/// Frame components of d_γ = g^{μν} ∂_μ g_{νγ}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaugeResidual {
    pub d: [f64; 4],
}

impl GaugeResidual {
    pub fn max_abs(&self) -> f64 {
        self.d.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// d_γ = g^{μν} ∂_μ g_{νγ} with Table 2 inverse components and exact metric
/// partials. d_L vanishes identically (every g_{XL} is constant).
pub fn wave_gauge_residual(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<GaugeResidual> {
    let gi = inverse_metric_frame(t, x, family)?.m;
    let mut d = [0.0; 4];
    for (ga, out) in d.iter_mut().enumerate() {
        for mu in 0..4 {
            for nu in 0..4 {
                if gi[mu][nu] != 0.0 {
                    *out += gi[mu][nu] * metric_partial(t, x, family, FRAME_DIRS[mu], (nu, ga))?;
                }
            }
        }
    }
    Ok(GaugeResidual { d })
}

/// The lowered-index form -g^{μν} ∂_μ g_{νγ} + g^{μν} ∂_γ g_{μν} / 2.
pub fn lowered_gauge_residual(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[f64; 4]> {
    let raised = wave_gauge_residual(t, x, family)?;
    let trace = gauge_trace_term(t, x, family)?;
    let mut out = [0.0; 4];
    for ga in 0..4 {
        out[ga] = -raised.d[ga] + trace[ga];
    }
    Ok(out)
}

/// The trace term g^{μν} ∂_γ g_{μν} / 2 = ∂_γ log|g| / 2, zero for this
/// family's constant determinant.
pub fn gauge_trace_term(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[f64; 4]> {
    let gi = inverse_metric_frame(t, x, family)?.m;
    let mut out = [0.0; 4];
    for (ga, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                if gi[mu][nu] != 0.0 {
                    acc += gi[mu][nu] * metric_partial(t, x, family, FRAME_DIRS[ga], (mu, nu))?;
                }
            }
        }
        *slot = acc / 2.0;
    }
    Ok(out)
}

/// The three linearized wave-coordinate conditions on the h-ansatz.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearizedGaugeResidual {
    /// ∂_Lbar h_LL - 2 δ^{AB} ∂_A h_BL + ∂_L(δ^{AB} h_AB)
    pub cons_l: f64,
    /// ∂_L h_LbarLbar - 2 δ^{AB} ∂_A h_BLbar + ∂_Lbar(δ^{AB} h_AB)
    pub cons_lbar: f64,
    /// ∂_Lbar h_LC + ∂_L h_LbarC - 2 δ^{AB} ∂_A h_BC + ∂_C(-h_LLbar + δ^{AB} h_AB), C = 2, 3
    pub cons_c: [f64; 2],
}

impl LinearizedGaugeResidual {
    pub fn max_abs(&self) -> f64 {
        self.cons_l
            .abs()
            .max(self.cons_lbar.abs())
            .max(self.cons_c[0].abs())
            .max(self.cons_c[1].abs())
    }
}

/// Evaluate the linearized conditions on the cone |x| < 1 - t.
pub fn linearized_gauge_residual(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
) -> Result<LinearizedGaugeResidual> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r >= 1.0 - t {
        return Err(Error::Domain(format!(
            "|x| = {r} outside the cone 1 - t = {}",
            1.0 - t
        )));
    }
    let h = ansatz_terms();
    let ev = |ts: &crate::terms::TermSum, dir: Dir| ts.deriv(dir).eval(family, t, x);
    let trace = h[2][2].plus(&h[3][3]);

    let cons_l = ev(&h[0][0], Dir::Lbar)? - 2.0 * (ev(&h[2][0], Dir::X2)? + ev(&h[3][0], Dir::X3)?)
        + ev(&trace, Dir::L)?;
    let cons_lbar = ev(&h[1][1], Dir::L)? - 2.0 * (ev(&h[2][1], Dir::X2)? + ev(&h[3][1], Dir::X3)?)
        + ev(&trace, Dir::Lbar)?;
    let mut cons_c = [0.0; 2];
    for (ci, c) in [(0usize, 2usize), (1usize, 3usize)] {
        let dc = if c == 2 { Dir::X2 } else { Dir::X3 };
        cons_c[ci] = ev(&h[0][c], Dir::Lbar)? + ev(&h[1][c], Dir::L)?
            - 2.0 * (ev(&h[2][c], Dir::X2)? + ev(&h[3][c], Dir::X3)?)
            + ev(&h[0][1].scaled(-1.0).plus(&trace), dc)?;
    }
    Ok(LinearizedGaugeResidual {
        cons_l,
        cons_lbar,
        cons_c,
    })
}

/// Symmetric pair of inputs to the quadratic form.
#[derive(Debug, Clone, Copy)]
pub struct PInputs {
    pub p: FrameSymTensor2,
    pub k: FrameSymTensor2,
}

/// Method A: P(p, k) = (tr p)(tr k)/4 - <p, k>/2 with indices raised by the
/// coordinate Minkowski metric after converting the frame components.
pub fn p_form_coord(p: &FrameSymTensor2, k: &FrameSymTensor2) -> f64 {
    let minv = minkowski_coord(); // its own inverse
    let pc = frame_to_coord(p).m;
    let kc = frame_to_coord(k).m;
    let mut tr_p = 0.0;
    let mut tr_k = 0.0;
    let mut full = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            tr_p += minv[a][b] * pc[a][b];
            tr_k += minv[a][b] * kc[a][b];
            for c in 0..4 {
                for d in 0..4 {
                    full += minv[a][c] * minv[b][d] * pc[a][b] * kc[c][d];
                }
            }
        }
    }
    0.25 * tr_p * tr_k - 0.5 * full
}

/// Method B: the null-frame expansion
///   P(p,k) = δ^{AB}(2 p_{AL} k_{BLbar} + 2 p_{ALbar} k_{BL} - p_{AB} k_{LLbar} - p_{LLbar} k_{AB})/4
///          - (p_{LL} k_{LbarLbar} + p_{LbarLbar} k_{LL})/8
///          - δ^{AB} δ^{A'B'}(2 p_{AA'} k_{BB'} - p_{AB} k_{A'B'})/4.
pub fn p_form_nullframe(p: &FrameSymTensor2, k: &FrameSymTensor2) -> f64 {
    let pm = &p.m;
    let km = &k.m;
    let mut t1 = 0.0;
    for a in 2..4 {
        t1 += 2.0 * pm[a][0] * km[a][1] + 2.0 * pm[a][1] * km[a][0]
            - pm[a][a] * km[0][1]
            - pm[0][1] * km[a][a];
    }
    let t2 = pm[0][0] * km[1][1] + pm[1][1] * km[0][0];
    let mut t3 = 0.0;
    for a in 2..4 {
        for ap in 2..4 {
            t3 += 2.0 * pm[a][ap] * km[a][ap] - pm[a][a] * km[ap][ap];
        }
    }
    0.25 * t1 - 0.125 * t2 - 0.25 * t3
}

/// Constraint slice check for [`p_semilinear_reduction`]: dh_{LL} = dh_{L2}
/// = dh_{L3} = 0 and dh_22 + dh_33 = 0 within `tol`.
fn check_constraint_slice(dh: &FrameSymTensor2, tol: f64) -> Result<()> {
    let m = &dh.m;
    let worst = m[0][0]
        .abs()
        .max(m[0][2].abs())
        .max(m[0][3].abs())
        .max((m[2][2] + m[3][3]).abs());
    if worst > tol {
        return Err(Error::Precondition(format!(
            "input violates the wave-coordinate slice by {worst:.3e} > {tol:.0e}"
        )));
    }
    Ok(())
}

/// On the constrained slice the asymptotic reduction is an identity:
/// P(dh, dh) = -((dh_22)² + (dh_33)² + 2 (dh_23)²)/2. Returns (lhs, rhs).
pub fn p_semilinear_reduction(dh: &FrameSymTensor2) -> Result<(f64, f64)> {
    check_constraint_slice(dh, 1e-12)?;
    let lhs = p_form_nullframe(dh, dh);
    let m = &dh.m;
    let rhs = -0.5 * (m[2][2] * m[2][2] + m[3][3] * m[3][3] + 2.0 * m[2][3] * m[2][3]);
    Ok((lhs, rhs))
}

/// Max wave-gauge residual over an interior sample grid, with the separate
/// exact d_L maximum.
pub fn gauge_scan(family: &ProfileFamily, points: &[(f64, [f64; 3])]) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    let mut worst_dl = 0.0f64;
    for &(t, x) in points {
        let r = wave_gauge_residual(t, x, family)?;
        worst = worst.max(r.max_abs());
        worst_dl = worst_dl.max(r.d[0].abs());
    }
    Ok((worst, worst_dl))
}

/// Helper: the frame metric itself, for building P inputs in tests/suites.
pub fn metric_as_p_input(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<FrameSymTensor2> {
    let m = metric_terms();
    let mut out = [[0.0; 4]; 4];
    for (i, row) in m.iter().enumerate() {
        for (j, ts) in row.iter().enumerate() {
            out[i][j] = ts.eval(family, t, x)?;
        }
    }
    FrameSymTensor2::new(out, Variance::Covariant, t, x)
}
