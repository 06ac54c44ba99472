//! The three scalar profile functions of the null argument s = x1 - t.
//!
//! chi1(s)  = ∫_0^s eps |log|r/4||^alpha dr          (odd, chi1' even)
//! chi2(s)  = 2 ∫_0^s chi1'(r)^2 dr                  (odd)
//! chitilde2 solves the Riccati equation
//!     chitilde2' = 2 chi1'^2 (1+chi1)^{-2} + chitilde2^2 / 8,   chitilde2(0) = 0.
//!
//! With u = -log(s/4) the chi1/chi2 antiderivatives are upper incomplete
//! gamma functions, so order-0 values are closed forms:
//!     chi1(s) = 4 eps Γ(alpha+1, log(4/s)),   chi2(s) = 8 eps² Γ(2 alpha+1, log(4/s)).
//!
//! chitilde2 is integrated adaptively (in u near s = 0, in s elsewhere) and
//! stored as a certified piecewise-quintic Hermite interpolant; its first
//! derivative always comes from the ODE right-hand side and its second from
//! the differentiated ODE, never from differentiating the interpolant.

use crate::error::{Error, Result};
use crate::num::gamma::upper_gamma;
use crate::num::ode::{integrate_scalar, OdeOptions};

/// Profile domain: all geometry lives in 0 <= x1 - t <= 3 - 3t, which stays
/// below 3.75 for t >= -1/4; |log(s/4)| never vanishes on [-S_MAX, S_MAX].
pub const S_MAX: f64 = 3.75;

/// |s| below this is treated as exactly 0 for singularity flagging.
pub const SINGULAR_WINDOW: f64 = 1e-300;

/// Safety bound on |chitilde2|: exceeding it inside the domain signals that
/// eps is too large for the bootstrap argument.
pub const CHITILDE_GUARD: f64 = 8.0;

/// Amplitude and log-power exponent of the profiles.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProfileParams {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ProfileParams {
    /// Validated constructor: 1/4 < alpha < 1/2, eps >= 0 and small enough
    /// that ∫_0^1 chi1'^2 = chi2(1)/2 <= 1.
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(0.25..0.5).contains(&alpha) || alpha == 0.25 {
            return Err(Error::Config(format!(
                "alpha = {alpha} outside (1/4, 1/2); use unchecked() for out-of-range controls"
            )));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::Config(format!(
                "epsilon = {epsilon} must be finite and >= 0"
            )));
        }
        let p = ProfileParams { epsilon, alpha };
        let energy = chi2_eval(1.0, 0, p)?.value / 2.0;
        if energy > 1.0 {
            return Err(Error::Config(format!(
                "epsilon too large: ∫_0^1 chi1'^2 = {energy:.6} > 1"
            )));
        }
        Ok(p)
    }

    /// Skip the alpha range check (negative controls, scans).
    pub fn unchecked(epsilon: f64, alpha: f64) -> Self {
        ProfileParams { epsilon, alpha }
    }
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            epsilon: 0.1,
            alpha: 0.4,
        }
    }
}

/// One profile evaluation: an extended-real value with singularity metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEval {
    pub value: f64,
    pub order: u8,
    pub singular: bool,
    pub s: f64,
}

fn check_domain(s: f64, order: u8) -> Result<()> {
    if !(s.is_finite() && s.abs() <= S_MAX) {
        return Err(Error::Domain(format!(
            "profile argument s = {s} outside [-{S_MAX}, {S_MAX}]"
        )));
    }
    if order > 2 {
        return Err(Error::Domain(format!("derivative order {order} > 2")));
    }
    Ok(())
}

/// |log(|s|/4)| for 0 < |s| < 4.
#[inline]
fn abs_log(s: f64) -> f64 {
    (4.0 / s.abs()).ln()
}

/// chi1(s, order): order 0 closed form via incomplete gamma; order 1 the even
/// function eps |log(|s|/4)|^alpha; order 2 the odd function
/// -eps alpha |log(|s|/4)|^{alpha-1} / s, singular at s = 0.
pub fn chi1_eval(s: f64, order: u8, params: ProfileParams) -> Result<ProfileEval> {
    check_domain(s, order)?;
    let ProfileParams {
        epsilon: e,
        alpha: a,
    } = params;
    let at_zero = s.abs() < SINGULAR_WINDOW;
    let value = if e == 0.0 {
        0.0
    } else {
        match order {
            0 => {
                if at_zero {
                    0.0
                } else {
                    s.signum() * 4.0 * e * upper_gamma(a + 1.0, abs_log(s))
                }
            }
            1 => {
                if at_zero {
                    f64::INFINITY
                } else {
                    e * abs_log(s).powf(a)
                }
            }
            _ => {
                if at_zero {
                    return Ok(ProfileEval {
                        value: f64::NAN,
                        order,
                        singular: true,
                        s,
                    });
                }
                -e * a * abs_log(s).powf(a - 1.0) / s
            }
        }
    };
    Ok(ProfileEval {
        value,
        order,
        singular: false,
        s,
    })
}

/// chi2(s, order): order 0 = 8 eps² Γ(2 alpha+1, log(4/|s|)) (odd extension);
/// order 1 = 2 eps² |log(|s|/4)|^{2 alpha}; order 2 = -4 eps² alpha
/// |log(|s|/4)|^{2 alpha - 1} / s, singular at s = 0.
pub fn chi2_eval(s: f64, order: u8, params: ProfileParams) -> Result<ProfileEval> {
    check_domain(s, order)?;
    let ProfileParams {
        epsilon: e,
        alpha: a,
    } = params;
    let at_zero = s.abs() < SINGULAR_WINDOW;
    let value = if e == 0.0 {
        0.0
    } else {
        match order {
            0 => {
                if at_zero {
                    0.0
                } else {
                    s.signum() * 8.0 * e * e * upper_gamma(2.0 * a + 1.0, abs_log(s))
                }
            }
            1 => {
                if at_zero {
                    f64::INFINITY
                } else {
                    2.0 * e * e * abs_log(s).powf(2.0 * a)
                }
            }
            _ => {
                if at_zero {
                    return Ok(ProfileEval {
                        value: f64::NAN,
                        order,
                        singular: true,
                        s,
                    });
                }
                -4.0 * e * e * a * abs_log(s).powf(2.0 * a - 1.0) / s
            }
        }
    };
    Ok(ProfileEval {
        value,
        order,
        singular: false,
        s,
    })
}

/// One quintic Hermite cell of the chitilde2 interpolant.
#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: f64,
    hi: f64,
    c: [f64; 6],
}

impl Cell {
    fn from_endpoint_data(lo: f64, hi: f64, y0: [f64; 3], y1: [f64; 3]) -> Cell {
        let h = hi - lo;
        let c0 = y0[0];
        let c1 = y0[1];
        let c2 = y0[2] / 2.0;
        let d0 = y1[0] - (c0 + c1 * h + c2 * h * h);
        let d1 = y1[1] - (c1 + 2.0 * c2 * h);
        let d2 = y1[2] - 2.0 * c2;
        let a = 10.0 * d0 - 4.0 * d1 * h + 0.5 * d2 * h * h;
        let b = -15.0 * d0 + 7.0 * d1 * h - d2 * h * h;
        let cc = 6.0 * d0 - 3.0 * d1 * h + 0.5 * d2 * h * h;
        Cell {
            lo,
            hi,
            c: [c0, c1, c2, a / h.powi(3), b / h.powi(4), cc / h.powi(5)],
        }
    }

    fn value(&self, s: f64) -> f64 {
        let x = s - self.lo;
        let c = &self.c;
        ((((c[5] * x + c[4]) * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
    }

    fn derivative(&self, s: f64) -> f64 {
        let x = s - self.lo;
        let c = &self.c;
        (((5.0 * c[5] * x + 4.0 * c[4]) * x + 3.0 * c[3]) * x + 2.0 * c[2]) * x + c[1]
    }
}

#[derive(Debug, Clone)]
struct DenseInterpolant {
    /// cells sorted ascending in s, covering [-S_MAX, -s0] and [s0, S_MAX]
    cells: Vec<Cell>,
    s0: f64,
}

impl DenseInterpolant {
    fn find(&self, s: f64) -> Option<&Cell> {
        let idx = self.cells.partition_point(|c| c.hi < s);
        self.cells.get(idx).filter(|c| c.lo <= s && s <= c.hi)
    }
}

/// Which function backs the chitilde2 slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChiTildeMode {
    /// The Riccati solution (the Ricci-flat metric).
    Standard,
    /// chi2 substituted for chitilde2: breaks the ODE, used as the
    /// sensitivity control for the Ricci verification.
    BrokenOde,
}

/// Evaluators for chi1, chi2, chitilde2 with derivatives up to order 2.
#[derive(Debug, Clone)]
pub struct ProfileFamily {
    params: ProfileParams,
    ode_tol: f64,
    mode: ChiTildeMode,
    table: Option<DenseInterpolant>,
    /// max |H'(s) - rhs(s, H(s))| observed on the certification grid
    cert_residual: f64,
}

/// Riccati right-hand side given chi1 data.
fn riccati_rhs(s: f64, y: f64, params: ProfileParams) -> Result<f64> {
    let c1 = chi1_eval(s, 0, params)?.value;
    let c1p = chi1_eval(s, 1, params)?.value;
    let base = 1.0 + c1;
    Ok(2.0 * c1p * c1p / (base * base) + y * y / 8.0)
}

/// Differentiated Riccati equation: chitilde2'' in terms of lower data.
fn riccati_rhs_prime(s: f64, y: f64, yp: f64, params: ProfileParams) -> Result<f64> {
    let c1 = chi1_eval(s, 0, params)?.value;
    let c1p = chi1_eval(s, 1, params)?.value;
    let c1pp = chi1_eval(s, 2, params)?;
    if c1pp.singular {
        return Err(Error::Singular("chitilde2'' requested at s = 0".into()));
    }
    let a = 1.0 + c1;
    Ok(4.0 * c1p * c1pp.value / (a * a) - 4.0 * c1p.powi(3) / (a * a * a) + y * yp / 4.0)
}

const S_START: f64 = 1e-12;
const S_BREAK: f64 = 0.5;

/// Integrate one side (sign = ±1) and return nodes ascending in |s|.
///
/// The step caps bound the quintic-Hermite interpolation error of the dense
/// table, not just the solve error, so retries shrink them too.
fn solve_side(
    sign: f64,
    params: ProfileParams,
    solver_tol: f64,
    step_scale: f64,
) -> Result<Vec<(f64, f64)>> {
    let y_start = chi2_eval(sign * S_START, 0, params)?.value;
    // Stage A in u = log(4/|s|), from u(S_START) down to u(S_BREAK).
    let u_hi = (4.0 / S_START).ln();
    let u_lo = (4.0 / S_BREAK).ln();
    // s = sign * s_abs with s_abs = 4 e^{-u}: dy/du = f(s, y) * ds/du = -sign * s_abs * f.
    let f_u = |u: f64, y: f64| -> Result<f64> {
        let s_abs = 4.0 * (-u).exp();
        Ok(-sign * s_abs * riccati_rhs(sign * s_abs, y, params)?)
    };
    let opts_u = OdeOptions {
        rel_tol: solver_tol,
        abs_tol: solver_tol * 1e-2,
        max_step: 0.05 * step_scale,
        guard: CHITILDE_GUARD,
        max_steps: 4_000_000,
    };
    let nodes_u = integrate_scalar(f_u, u_hi, y_start, u_lo, &opts_u)?;
    let mut nodes: Vec<(f64, f64)> = nodes_u
        .into_iter()
        .map(|(u, y)| (sign * 4.0 * (-u).exp(), y))
        .collect();
    // Stage B in s from sign*S_BREAK to sign*S_MAX.
    let (s_b, y_b) = *nodes.last().unwrap();
    let opts_s = OdeOptions {
        rel_tol: solver_tol,
        abs_tol: solver_tol * 1e-2,
        max_step: step_scale / 64.0,
        guard: CHITILDE_GUARD,
        max_steps: 4_000_000,
    };
    let stage_b = integrate_scalar(
        |s, y| riccati_rhs(s, y, params),
        s_b,
        y_b,
        sign * S_MAX,
        &opts_s,
    )?;
    nodes.extend(stage_b.into_iter().skip(1));
    Ok(nodes)
}

fn build_interpolant(
    params: ProfileParams,
    solver_tol: f64,
    step_scale: f64,
) -> Result<DenseInterpolant> {
    let mut cells = Vec::new();
    for sign in [-1.0, 1.0] {
        let nodes = solve_side(sign, params, solver_tol, step_scale)?;
        let data: Vec<(f64, [f64; 3])> = nodes
            .iter()
            .map(|&(s, y)| {
                let yp = riccati_rhs(s, y, params)?;
                let ypp = riccati_rhs_prime(s, y, yp, params)?;
                Ok((s, [y, yp, ypp]))
            })
            .collect::<Result<_>>()?;
        for w in data.windows(2) {
            let (s0, y0) = w[0];
            let (s1, y1) = w[1];
            let (lo, hi, ylo, yhi) = if s0 < s1 {
                (s0, s1, y0, y1)
            } else {
                (s1, s0, y1, y0)
            };
            cells.push(Cell::from_endpoint_data(lo, hi, ylo, yhi));
        }
    }
    cells.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    Ok(DenseInterpolant { cells, s0: S_START })
}

impl ProfileFamily {
    /// Build the family, solving the Riccati ODE and certifying the dense
    /// interpolant to `ode_tol` pointwise.
    pub fn build(params: ProfileParams, ode_tol: f64) -> Result<ProfileFamily> {
        if !(ode_tol > 0.0) {
            return Err(Error::Config(format!(
                "ode_tol = {ode_tol} must be positive"
            )));
        }
        if params.epsilon == 0.0 {
            // zero source, zero initial value: chitilde2 vanishes identically
            return Ok(ProfileFamily {
                params,
                ode_tol,
                mode: ChiTildeMode::Standard,
                table: None,
                cert_residual: 0.0,
            });
        }
        let solver_tol = (ode_tol * 1e-3).clamp(2e-14, 1e-10);
        let mut step_scale = 1.0;
        for _attempt in 0..3 {
            let table = build_interpolant(params, solver_tol, step_scale)?;
            let mut fam = ProfileFamily {
                params,
                ode_tol,
                mode: ChiTildeMode::Standard,
                table: Some(table),
                cert_residual: 0.0,
            };
            let resid = fam.certify()?;
            fam.cert_residual = resid;
            if resid <= ode_tol {
                return Ok(fam);
            }
            step_scale *= 0.25;
        }
        Err(Error::Ode(format!(
            "chitilde2 interpolant failed certification at ode_tol = {ode_tol}"
        )))
    }

    /// Max |H'(s) - rhs(s, H(s))| over 5 interior points of every cell.
    fn certify(&self) -> Result<f64> {
        let table = self.table.as_ref().expect("certify called with table");
        let mut worst = 0.0f64;
        for cell in &table.cells {
            for k in 1..=5 {
                let s = cell.lo + (cell.hi - cell.lo) * (k as f64) / 6.0;
                let r = (cell.derivative(s) - riccati_rhs(s, cell.value(s), self.params)?).abs();
                worst = worst.max(r);
            }
        }
        Ok(worst)
    }

    pub fn params(&self) -> ProfileParams {
        self.params
    }

    pub fn ode_tol(&self) -> f64 {
        self.ode_tol
    }

    /// Certified max pointwise ODE residual of the stored interpolant.
    pub fn certified_residual(&self) -> f64 {
        self.cert_residual
    }

    /// True when chitilde2 has been replaced by chi2 (negative control).
    pub fn is_broken_ode(&self) -> bool {
        self.mode == ChiTildeMode::BrokenOde
    }

    /// A family whose chitilde2 slot is backed by chi2: the Riccati equation
    /// no longer holds, so the metric built from it is not Ricci-flat.
    pub fn broken_ode_variant(&self) -> ProfileFamily {
        ProfileFamily {
            params: self.params,
            ode_tol: self.ode_tol,
            mode: ChiTildeMode::BrokenOde,
            table: None,
            cert_residual: 0.0,
        }
    }

    pub fn chi1(&self, s: f64, order: u8) -> Result<ProfileEval> {
        chi1_eval(s, order, self.params)
    }

    pub fn chi2(&self, s: f64, order: u8) -> Result<ProfileEval> {
        chi2_eval(s, order, self.params)
    }

    /// chitilde2 and its derivatives. Order 1 comes from the ODE right-hand
    /// side, order 2 from the differentiated ODE (singular at s = 0).
    pub fn chitilde2(&self, s: f64, order: u8) -> Result<ProfileEval> {
        check_domain(s, order)?;
        if self.mode == ChiTildeMode::BrokenOde {
            return self.chi2(s, order);
        }
        let value0 = self.chitilde2_value(s)?;
        match order {
            0 => Ok(ProfileEval {
                value: value0,
                order,
                singular: false,
                s,
            }),
            1 => {
                if s.abs() < SINGULAR_WINDOW && self.params.epsilon != 0.0 {
                    return Ok(ProfileEval {
                        value: f64::INFINITY,
                        order,
                        singular: false,
                        s,
                    });
                }
                Ok(ProfileEval {
                    value: riccati_rhs(s, value0, self.params)?,
                    order,
                    singular: false,
                    s,
                })
            }
            _ => {
                if s.abs() < SINGULAR_WINDOW {
                    if self.params.epsilon == 0.0 {
                        return Ok(ProfileEval {
                            value: 0.0,
                            order,
                            singular: false,
                            s,
                        });
                    }
                    return Ok(ProfileEval {
                        value: f64::NAN,
                        order,
                        singular: true,
                        s,
                    });
                }
                let yp = riccati_rhs(s, value0, self.params)?;
                Ok(ProfileEval {
                    value: riccati_rhs_prime(s, value0, yp, self.params)?,
                    order,
                    singular: false,
                    s,
                })
            }
        }
    }

    fn chitilde2_value(&self, s: f64) -> Result<f64> {
        let table = match &self.table {
            None => return Ok(0.0),
            Some(t) => t,
        };
        if s.abs() <= table.s0 {
            // below the integration start the quadratic term is O(s^3 log s):
            // chi2 matches chitilde2 to ~1e-28 here
            return Ok(chi2_eval(s, 0, self.params)?.value);
        }
        match table.find(s) {
            Some(cell) => Ok(cell.value(s)),
            None => Err(Error::Domain(format!(
                "chitilde2 argument s = {s} outside table"
            ))),
        }
    }

    /// Residual chitilde2' - 2 chi1'^2 (1+chi1)^{-2} - chitilde2^2/8 of the
    /// *stored interpolant*, using the cell polynomial's own derivative.
    pub fn ode_residual(&self, s: f64) -> Result<f64> {
        match &self.table {
            None => Ok(0.0),
            Some(table) => match table.find(s) {
                Some(cell) => Ok(cell.derivative(s) - riccati_rhs(s, cell.value(s), self.params)?),
                None => Err(Error::Domain(format!("s = {s} outside chitilde2 table"))),
            },
        }
    }

    /// sup over a dense grid of |chitilde2 - chi2| on [-1, 1] (reported, no
    /// threshold imposed).
    pub fn chitilde_chi2_gap(&self) -> Result<f64> {
        let mut sup = 0.0f64;
        for k in -400..=400 {
            let s = k as f64 / 400.0;
            let gap = (self.chitilde2(s, 0)?.value - self.chi2(s, 0)?.value).abs();
            sup = sup.max(gap);
        }
        Ok(sup)
    }
}

/// Bound report from [`profile_bound_check`].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ProfileBoundReport {
    /// sup over |s| <= 1 of |chitilde2|
    pub chitilde_sup: f64,
    /// ∫_0^1 chi1'^2 ds (= chi2(1)/2, closed form)
    pub chi1_energy: f64,
}

/// Asserts sup_{|s|<=1} |chitilde2| <= 2 and ∫_0^1 chi1'^2 <= 1, reporting
/// the suprema; violation names the constant.
pub fn profile_bound_check(family: &ProfileFamily) -> Result<ProfileBoundReport> {
    let mut sup = 0.0f64;
    for k in -1000..=1000 {
        let s = k as f64 / 1000.0;
        sup = sup.max(family.chitilde2(s, 0)?.value.abs());
    }
    let energy = family.chi2(1.0, 0)?.value / 2.0;
    let report = ProfileBoundReport {
        chitilde_sup: sup,
        chi1_energy: energy,
    };
    if sup > 2.0 {
        return Err(Error::Verification(format!(
            "bootstrap bound violated: sup |chitilde2| = {sup} > 2"
        )));
    }
    if energy > 1.0 {
        return Err(Error::Verification(format!(
            "energy bound violated: ∫_0^1 chi1'^2 = {energy} > 1"
        )));
    }
    Ok(report)
}

/// Profile table as CSV: s, chi1, chi1', chi2, chi2', chitilde2, chitilde2'.
pub fn write_profile_csv<W: std::io::Write>(
    family: &ProfileFamily,
    n: usize,
    w: &mut W,
) -> Result<()> {
    writeln!(w, "s,chi1,chi1p,chi2,chi2p,chitilde2,chitilde2p")?;
    for k in 0..=n {
        let s = -S_MAX + 2.0 * S_MAX * (k as f64) / (n as f64);
        writeln!(
            w,
            "{s:.8},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            family.chi1(s, 0)?.value,
            family.chi1(s, 1)?.value,
            family.chi2(s, 0)?.value,
            family.chi2(s, 1)?.value,
            family.chitilde2(s, 0)?.value,
            family.chitilde2(s, 1)?.value,
        )?;
    }
    Ok(())
}
