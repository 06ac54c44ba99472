//! Christoffel symbols, the linear/quadratic curvature split, the Ricci
//! tensor and the L² curvature norm.
//!
//! Conventions (all frame-indexed, order L, Lbar, 2, 3):
//!
//!   Γ_{αβγ} = (∂_α g_{βγ} + ∂_γ g_{βα} - ∂_β g_{αγ}) / 2      (lowered, middle index down)
//!   R_{μανβ} = ∂_β Γ_{μαν} - ∂_ν Γ_{μαβ}
//!            + g^{λγ} (Γ_{νλα} Γ_{μγβ} - Γ_{αλβ} Γ_{μγν})
//!
//! and the split R = R_lin + R_quad into the derivative and product parts.
//! The only nonvanishing assembled components carry the index multiset
//! {A, Lbar, B, Lbar}; their closed forms are
//!
//!   R_lin_{A Lbar B Lbar}  = δ_AB (χ'_{2A}/2 - 2 χ''_{1A})
//!   R_quad_{A Lbar B Lbar} = δ_AB (χ_{1A}^{-1} χ'_{1A}² + χ̃₂(χ'_{1A} - χ_{2A}/4)/4)
//!
//! whose g^{AB} trace is the Riccati residual χ̃₂' - 2χ₁'²(1+χ₁)^{-2} - χ̃₂²/8,
//! so the metric is Ricci-flat exactly when the profile ODE holds.

use crate::error::{Error, Result};
use crate::frame::FrameIndex;
use crate::metric::{inverse_metric_frame, metric_partial, metric_partial2_frame, FRAME_DIRS};
use crate::num::quad::QuadratureOutcome;
use crate::profiles::{ProfileFamily, S_MAX};
use crate::sobolev::{classify, default_delta_ladder, reduced_integral, slice, SliceKind, Verdict};
use serde::Serialize;

pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// How to obtain the Christoffel table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChristoffelMethod {
    /// The hand-derived nonzero list.
    Closed,
    /// Assembled from the defining formula with exact metric partials.
    Numeric,
}

/// All lowered Christoffel symbols at a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChristoffelTable {
    pub lowered: Rank3,
    pub t: f64,
    pub x: [f64; 3],
}

impl ChristoffelTable {
    /// Lowered symbol by frame index triple.
    pub fn get(&self, a: FrameIndex, b: FrameIndex, g: FrameIndex) -> f64 {
        self.lowered[a.idx()][b.idx()][g.idx()]
    }

    /// Raise the middle index with the inverse metric: Γ_α^β_γ = g^{βδ} Γ_{αδγ}.
    pub fn raised_middle(&self, ginv: &[[f64; 4]; 4]) -> Rank3 {
        let mut out = [[[0.0; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for g in 0..4 {
                    out[a][b][g] = (0..4).map(|d| ginv[b][d] * self.lowered[a][d][g]).sum();
                }
            }
        }
        out
    }
}

/// Profile data bundle used by the closed formulas.
struct ProfileData {
    ct: f64,
    ctp: f64,
    /// chi_{1A}, chi'_{1A}, chi''_{1A} for A = 2, 3
    x1a: [[f64; 3]; 2],
}

impl ProfileData {
    fn at(family: &ProfileFamily, s: f64, need_second: bool) -> Result<ProfileData> {
        let c1 = family.chi1(s, 0)?.value;
        let c1p = family.chi1(s, 1)?.value;
        let c1pp = if need_second {
            let e = family.chi1(s, 2)?;
            if e.singular {
                return Err(Error::Singular(format!(
                    "chi1'' on the singular line, s = {s}"
                )));
            }
            e.value
        } else {
            f64::NAN
        };
        let a = 1.0 + c1;
        let x12 = [a, c1p, c1pp];
        let x13 = [
            1.0 / a,
            -c1p / (a * a),
            if need_second {
                -c1pp / (a * a) + 2.0 * c1p * c1p / (a * a * a)
            } else {
                f64::NAN
            },
        ];
        Ok(ProfileData {
            ct: family.chitilde2(s, 0)?.value,
            ctp: family.chitilde2(s, 1)?.value,
            x1a: [x12, x13],
        })
    }

    /// chi_{2A} = chi_{1A} chitilde2 and its s-derivative.
    fn x2a(&self, family: &ProfileFamily, s: f64, a: usize) -> Result<(f64, f64)> {
        let _ = (family, s);
        let v = self.x1a[a][0] * self.ct;
        let vp = self.x1a[a][1] * self.ct + self.x1a[a][0] * self.ctp;
        Ok((v, vp))
    }
}

/// Christoffel table by either method. The closed method needs only
/// order-1 profile data; the numeric method differentiates Table 1 exactly.
pub fn christoffel(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
    method: ChristoffelMethod,
) -> Result<ChristoffelTable> {
    let s = x[0] - t;
    if s.abs() > S_MAX {
        return Err(Error::Domain(format!(
            "point with s = {s} outside profile domain"
        )));
    }
    let lowered = match method {
        ChristoffelMethod::Closed => {
            let d = ProfileData::at(family, s, false)?;
            let mut g: Rank3 = [[[0.0; 4]; 4]; 4];
            let (l, lb) = (0usize, 1usize);
            g[l][lb][lb] = -d.ct / 2.0;
            g[lb][lb][l] = -d.ct / 2.0;
            g[lb][l][lb] = d.ct / 2.0;
            g[lb][lb][lb] = -d.ct / 2.0 + t * d.ctp;
            for (ai, a) in [(0usize, 2usize), (1usize, 3usize)] {
                let xa = x[a - 1];
                let (x2a, x2ap) = d.x2a(family, s, ai)?;
                let x1ap = d.x1a[ai][1];
                g[lb][a][lb] = 0.5 * xa * x2ap;
                g[lb][a][a] = -x1ap;
                g[a][a][lb] = -x1ap;
                g[a][lb][a] = -0.25 * x2a + x1ap;
            }
            g
        }
        ChristoffelMethod::Numeric => {
            let mut g: Rank3 = [[[0.0; 4]; 4]; 4];
            for (ai, row) in g.iter_mut().enumerate() {
                for be in 0..4 {
                    for ga in 0..4 {
                        let da = metric_partial(t, x, family, FRAME_DIRS[ai], (be, ga))?;
                        let dg = metric_partial(t, x, family, FRAME_DIRS[ga], (be, ai))?;
                        let db = metric_partial(t, x, family, FRAME_DIRS[be], (ai, ga))?;
                        row[be][ga] = 0.5 * (da + dg - db);
                    }
                }
            }
            g
        }
    };
    Ok(ChristoffelTable { lowered, t, x })
}

/// ∂_δ Γ_{αβγ} from exact second metric partials (frame direction index δ).
fn christoffel_partial_exact(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[Rank3; 4]> {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for (de, cube) in out.iter_mut().enumerate() {
        for (ai, row) in cube.iter_mut().enumerate() {
            for be in 0..4 {
                for ga in 0..4 {
                    let da = metric_partial2_frame(t, x, family, de, ai, (be, ga))?;
                    let dg = metric_partial2_frame(t, x, family, de, ga, (be, ai))?;
                    let db = metric_partial2_frame(t, x, family, de, be, (ai, ga))?;
                    row[be][ga] = 0.5 * (da + dg - db);
                }
            }
        }
    }
    Ok(out)
}

/// Assemble R from Γ, ∂Γ and the inverse metric.
fn assemble_riemann(gamma: &Rank3, dgamma: &[Rank3; 4], ginv: &[[f64; 4]; 4]) -> Rank4 {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for mu in 0..4 {
        for al in 0..4 {
            for nu in 0..4 {
                for be in 0..4 {
                    let mut v = dgamma[be][mu][al][nu] - dgamma[nu][mu][al][be];
                    for lam in 0..4 {
                        for ga in 0..4 {
                            v += ginv[lam][ga]
                                * (gamma[nu][lam][al] * gamma[mu][ga][be]
                                    - gamma[al][lam][be] * gamma[mu][ga][nu]);
                        }
                    }
                    r[mu][al][nu][be] = v;
                }
            }
        }
    }
    r
}

/// Linear/quadratic curvature split at a point.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureSplit {
    /// closed-form R_lin_{A Lbar B Lbar}, indices A, B in {2, 3}
    pub lin: [[f64; 2]; 2],
    /// closed-form R_quad_{A Lbar B Lbar}
    pub quad: [[f64; 2]; 2],
    /// full assembled tensor from the general formula with exact partials
    pub assembled: Rank4,
    pub t: f64,
    pub x: [f64; 3],
}

impl CurvatureSplit {
    /// Closed-form assembled block R_{A Lbar B Lbar}.
    pub fn block(&self, a: usize, b: usize) -> f64 {
        self.lin[a][b] + self.quad[a][b]
    }

    /// Max |assembled component| whose indices include L or three spatials.
    pub fn max_forbidden_component(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for al in 0..4 {
                for nu in 0..4 {
                    for be in 0..4 {
                        let idx = [mu, al, nu, be];
                        let has_l = idx.contains(&0);
                        let spatials = idx.iter().filter(|&&i| i >= 2).count();
                        if has_l || spatials >= 3 {
                            worst = worst.max(self.assembled[mu][al][nu][be].abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Exact curvature split and assembled tensor. Off the singular line.
pub fn riemann_split(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<CurvatureSplit> {
    let s = x[0] - t;
    let d = ProfileData::at(family, s, true)?;
    let mut lin = [[0.0; 2]; 2];
    let mut quad = [[0.0; 2]; 2];
    for ai in 0..2 {
        let (x2a, x2ap) = d.x2a(family, s, ai)?;
        let x1a = d.x1a[ai][0];
        let x1ap = d.x1a[ai][1];
        let x1app = d.x1a[ai][2];
        lin[ai][ai] = 0.5 * x2ap - 2.0 * x1app;
        quad[ai][ai] = x1ap * x1ap / x1a + 0.25 * d.ct * (-0.25 * x2a + x1ap);
    }
    let gamma = christoffel(t, x, family, ChristoffelMethod::Closed)?;
    let dgamma = christoffel_partial_exact(t, x, family)?;
    let ginv = inverse_metric_frame(t, x, family)?;
    let assembled = assemble_riemann(&gamma.lowered, &dgamma, &ginv.m);
    Ok(CurvatureSplit {
        lin,
        quad,
        assembled,
        t,
        x,
    })
}

/// Independent stencil oracle: R assembled with ∂Γ from central differences
/// of the (numeric-method) Christoffel table along frame directions.
pub fn riemann_fd(t: f64, x: [f64; 3], family: &ProfileFamily, h: f64) -> Result<Rank4> {
    let displace = |k: usize, sgn: f64| -> (f64, [f64; 3]) {
        let mut tt = t;
        let mut xx = x;
        match k {
            0 => {
                tt += sgn * h;
                xx[0] += sgn * h;
            }
            1 => {
                tt += sgn * h;
                xx[0] -= sgn * h;
            }
            2 => xx[1] += sgn * h,
            _ => xx[2] += sgn * h,
        }
        (tt, xx)
    };
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for (de, cube) in dgamma.iter_mut().enumerate() {
        let (tp, xp) = displace(de, 1.0);
        let (tm, xm) = displace(de, -1.0);
        let gp = christoffel(tp, xp, family, ChristoffelMethod::Numeric)?;
        let gm = christoffel(tm, xm, family, ChristoffelMethod::Numeric)?;
        for ai in 0..4 {
            for be in 0..4 {
                for ga in 0..4 {
                    cube[ai][be][ga] =
                        (gp.lowered[ai][be][ga] - gm.lowered[ai][be][ga]) / (2.0 * h);
                }
            }
        }
    }
    let gamma = christoffel(t, x, family, ChristoffelMethod::Numeric)?;
    let ginv = inverse_metric_frame(t, x, family)?;
    Ok(assemble_riemann(&gamma.lowered, &dgamma, &ginv.m))
}

/// Frame Ricci tensor Ric_{αβ} = g^{μν} R_{μανβ}.
pub fn ricci(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[[f64; 4]; 4]> {
    let split = riemann_split(t, x, family)?;
    let ginv = inverse_metric_frame(t, x, family)?;
    let mut ric = [[0.0; 4]; 4];
    for (al, row) in ric.iter_mut().enumerate() {
        for (be, v) in row.iter_mut().enumerate() {
            for mu in 0..4 {
                for nu in 0..4 {
                    *v += ginv.m[mu][nu] * split.assembled[mu][al][nu][be];
                }
            }
        }
    }
    Ok(ric)
}

/// Ric_{Lbar Lbar} directly from the trace identity: the Riccati residual
/// χ̃₂' - 2 χ₁'² (1+χ₁)^{-2} - χ̃₂²/8 of whatever occupies the χ̃₂ slot.
pub fn ricci_lbarlbar_closed(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<f64> {
    let s = x[0] - t;
    let c1 = family.chi1(s, 0)?.value;
    let c1p = family.chi1(s, 1)?.value;
    let ct = family.chitilde2(s, 0)?.value;
    let ctp = family.chitilde2(s, 1)?.value;
    let a = 1.0 + c1;
    Ok(ctp - 2.0 * c1p * c1p / (a * a) - ct * ct / 8.0)
}

/// Max |Ric component| at a point.
pub fn ricci_max(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<f64> {
    let ric = ricci(t, x, family)?;
    Ok(ric.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Pointwise squared curvature density: the declared contraction
/// (g^{L Lbar})² Σ_{A,B} g^{AA} g^{BB} R_{A Lbar B Lbar}².
///
/// A pure function of s = x1 - t, so the L² norm over a slice reduces to a
/// 1-D weighted integral.
pub fn curvature_density(s: f64, family: &ProfileFamily) -> Result<f64> {
    let d = ProfileData::at(family, s, true)?;
    let mut sum = 0.0;
    for ai in 0..2 {
        let (x2a, x2ap) = d.x2a(family, s, ai)?;
        let x1a = d.x1a[ai][0];
        let x1ap = d.x1a[ai][1];
        let x1app = d.x1a[ai][2];
        let rho = 0.5 * x2ap - 2.0 * x1app + x1ap * x1ap / x1a + 0.25 * d.ct * (-0.25 * x2a + x1ap);
        let raised = rho / x1a;
        sum += raised * raised;
    }
    Ok(0.25 * sum)
}

/// ‖R‖_{L²(D_t)} outcome: the extrapolated ladder limit.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureNorm {
    pub t: f64,
    /// extrapolated ∫ |R|² over D_t
    pub squared: f64,
    pub norm: f64,
    pub fit_quality: f64,
    pub ladder: Vec<(f64, f64)>,
    /// the contraction convention recorded for the report header
    pub convention: &'static str,
}

pub const CURVATURE_CONTRACTION: &str =
    "|R|^2 = (g^{LLbar})^2 sum_{A,B} g^{AA} g^{BB} (R_{A Lbar B Lbar})^2";

/// L² norm of the curvature over the bent slice D_t by truncation ladder
/// and fitted extrapolation (the integrable log-power tail is far too slow
/// to truncate directly).
pub fn curvature_l2_norm(t: f64, family: &ProfileFamily, quad_tol: f64) -> Result<CurvatureNorm> {
    let sl = slice(SliceKind::Bent, t);
    sl.check_profile_domain()?;
    let f = |s: f64| curvature_density(s, family);
    let deltas = default_delta_ladder();
    let mut ladder = Vec::with_capacity(deltas.len());
    for &d in &deltas {
        ladder.push((d, reduced_integral(&f, &sl, 0, d, quad_tol)?.value));
    }
    let verdict = classify(&ladder, family.params().alpha)?;
    match verdict.verdict {
        Verdict::Finite { limit } => Ok(CurvatureNorm {
            t,
            squared: limit,
            norm: limit.max(0.0).sqrt(),
            fit_quality: verdict.fit_quality,
            ladder,
            convention: CURVATURE_CONTRACTION,
        }),
        other => Err(Error::Quadrature(format!(
            "curvature L2 ladder did not classify finite at t = {t}: {other:?}"
        ))),
    }
}

/// Reduced 1-D curvature integrand at fixed delta, for diagnostics.
pub fn curvature_truncated(
    t: f64,
    family: &ProfileFamily,
    delta: f64,
    quad_tol: f64,
) -> Result<QuadratureOutcome> {
    let sl = slice(SliceKind::Bent, t);
    reduced_integral(
        &|s: f64| curvature_density(s, family),
        &sl,
        0,
        delta,
        quad_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ProfileParams;

    fn fam() -> ProfileFamily {
        ProfileFamily::build(ProfileParams::default(), 1e-10).unwrap()
    }

    const P: (f64, [f64; 3]) = (0.3, [1.0, 0.4, -0.2]);

    #[test]
    fn minkowski_christoffels_vanish() {
        let zero = ProfileFamily::build(ProfileParams::unchecked(0.0, 0.4), 1e-10).unwrap();
        for method in [ChristoffelMethod::Closed, ChristoffelMethod::Numeric] {
            let g = christoffel(0.2, [0.7, 0.1, 0.3], &zero, method).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        assert_eq!(g.lowered[a][b][c], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_llbarlbar_value() {
        let f = fam();
        let (t, x) = P;
        let g = christoffel(t, x, &f, ChristoffelMethod::Closed).unwrap();
        let ct = f.chitilde2(x[0] - t, 0).unwrap().value;
        assert!((g.lowered[0][1][1] + ct / 2.0).abs() < 1e-16);
    }

    #[test]
    fn closed_vs_numeric_christoffel() {
        let f = fam();
        let (t, x) = P;
        let gc = christoffel(t, x, &f, ChristoffelMethod::Closed).unwrap();
        let gn = christoffel(t, x, &f, ChristoffelMethod::Numeric).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!(
                        (gc.lowered[a][b][c] - gn.lowered[a][b][c]).abs() < 1e-13,
                        "Γ[{a}][{b}][{c}]: {} vs {}",
                        gc.lowered[a][b][c],
                        gn.lowered[a][b][c]
                    );
                }
            }
        }
    }

    #[test]
    fn outer_symmetry() {
        let f = fam();
        let (t, x) = P;
        let g = christoffel(t, x, &f, ChristoffelMethod::Closed).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!((g.lowered[a][b][c] - g.lowered[c][b][a]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn assembled_zero_structure_and_block_match() {
        let f = fam();
        let (t, x) = P;
        let split = riemann_split(t, x, &f).unwrap();
        assert!(split.max_forbidden_component() < 1e-10);
        // assembled block equals the closed displays
        for a in 0..2 {
            for b in 0..2 {
                let asm = split.assembled[2 + a][1][2 + b][1];
                assert!(
                    (asm - split.block(a, b)).abs() < 1e-12,
                    "block ({a},{b}): {asm} vs {}",
                    split.block(a, b)
                );
            }
        }
        // nonzero-block symmetry R_{A Lbar B Lbar} = R_{B Lbar A Lbar}
        assert!((split.assembled[2][1][3][1] - split.assembled[3][1][2][1]).abs() < 1e-13);
    }

    #[test]
    fn quad_block_is_the_papers_product_form() {
        // R_quad_{2 Lbar 2 Lbar} = g^{CD} Γ_{2CLbar} Γ_{2DLbar} - g^{LLbar} Γ_{Lbar L Lbar} Γ_{2 Lbar 2}
        let f = fam();
        let (t, x) = P;
        let split = riemann_split(t, x, &f).unwrap();
        let gam = christoffel(t, x, &f, ChristoffelMethod::Closed)
            .unwrap()
            .lowered;
        let gi = inverse_metric_frame(t, x, &f).unwrap().m;
        let mut want = -gi[0][1] * gam[1][0][1] * gam[2][1][2];
        for c in 2..4 {
            for dd in 2..4 {
                want += gi[c][dd] * gam[2][c][1] * gam[2][dd][1];
            }
        }
        assert!((split.quad[0][0] - want).abs() < 1e-14);
    }

    #[test]
    fn trace_identities_with_one_eighth() {
        // g^{AB} R_lin = χ̃₂' - 4χ₁'²/(1+χ₁)²; g^{AB} R_quad = 2χ₁'²/(1+χ₁)² - χ̃₂²/8
        let f = fam();
        let (t, x) = P;
        let s = x[0] - t;
        let split = riemann_split(t, x, &f).unwrap();
        let gi = inverse_metric_frame(t, x, &f).unwrap().m;
        let mut tr_lin = 0.0;
        let mut tr_quad = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                tr_lin += gi[2 + a][2 + b] * split.lin[a][b];
                tr_quad += gi[2 + a][2 + b] * split.quad[a][b];
            }
        }
        let c1 = f.chi1(s, 0).unwrap().value;
        let c1p = f.chi1(s, 1).unwrap().value;
        let ct = f.chitilde2(s, 0).unwrap().value;
        let ctp = f.chitilde2(s, 1).unwrap().value;
        let aa = (1.0 + c1) * (1.0 + c1);
        assert!((tr_lin - (ctp - 4.0 * c1p * c1p / aa)).abs() < 1e-13);
        assert!((tr_quad - (2.0 * c1p * c1p / aa - ct * ct / 8.0)).abs() < 1e-14);
    }

    #[test]
    fn ricci_flat_and_closed_residual_agree() {
        let f = fam();
        for &(t, x) in &[P, (0.1, [0.5, 0.1, 0.1]), (0.6, [1.5, -0.3, 0.2])] {
            let m = ricci_max(t, x, &f).unwrap();
            assert!(m < 1e-11, "max Ric = {m} at ({t}, {x:?})");
            let closed = ricci_lbarlbar_closed(t, x, &f).unwrap();
            assert!(closed.abs() < 1e-11);
        }
    }

    #[test]
    fn broken_ode_ricci_equals_its_residual() {
        let f = fam().broken_ode_variant();
        let (t, x) = P;
        let ric = ricci(t, x, &f).unwrap();
        let closed = ricci_lbarlbar_closed(t, x, &f).unwrap();
        // Ric(Lbar, Lbar) from the assembled tensor: frame entry [1][1]
        assert!(
            (ric[1][1] - closed).abs() < 1e-10,
            "assembled {} vs residual {closed}",
            ric[1][1]
        );
        assert!(closed.abs() > 1e-4, "broken ODE must be visible: {closed}");
    }

    #[test]
    fn singular_line_rejected() {
        let f = fam();
        assert!(matches!(
            riemann_split(0.5, [0.5, 0.1, 0.0], &f),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn fd_oracle_converges_second_order() {
        let f = fam();
        let (t, x) = P;
        let exact = riemann_split(t, x, &f).unwrap().assembled;
        let mut errs = [0.0f64; 2];
        for (i, h) in [1e-2, 5e-3].into_iter().enumerate() {
            let fd = riemann_fd(t, x, &f, h).unwrap();
            let mut worst = 0.0f64;
            for mu in 0..4 {
                for al in 0..4 {
                    for nu in 0..4 {
                        for be in 0..4 {
                            worst = worst.max((fd[mu][al][nu][be] - exact[mu][al][nu][be]).abs());
                        }
                    }
                }
            }
            errs[i] = worst;
        }
        let order = crate::num::fd::observed_order(errs[0], errs[1]);
        assert!((1.5..2.5).contains(&order), "order {order}, errs {errs:?}");
    }

    #[test]
    fn curvature_norm_frozen_oracle() {
        // ladder-extrapolated golden values (protocol-defined, frozen from
        // an independent DOP853 + QUADPACK pipeline)
        let f = fam();
        let n0 = curvature_l2_norm(0.0, &f, 1e-11).unwrap();
        assert!(
            (n0.norm - 0.613_657_357).abs() < 1e-4,
            "||R||(0) = {}",
            n0.norm
        );
        let n5 = curvature_l2_norm(0.5, &f, 1e-11).unwrap();
        assert!((n5.norm - 0.408_216_94).abs() < 1e-4);
    }

    #[test]
    fn curvature_norm_zero_for_minkowski() {
        let zero = ProfileFamily::build(ProfileParams::unchecked(0.0, 0.4), 1e-10).unwrap();
        let n = curvature_l2_norm(0.25, &zero, 1e-10).unwrap();
        assert_eq!(n.norm, 0.0);
    }
}
