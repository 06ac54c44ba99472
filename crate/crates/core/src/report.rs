//! Suite orchestration, machine-readable reporting and golden files.

use crate::causality::{boundary_scan, write_scan_csv};
use crate::error::{Error, Result};
use crate::frame::{det4, frame_to_coord, FrameSymTensor2, Variance};
use crate::gauge::{
    gauge_trace_term, linearized_gauge_residual, lowered_gauge_residual, p_form_coord,
    p_form_nullframe, p_semilinear_reduction, wave_gauge_residual,
};
use crate::geometry::{
    christoffel, curvature_l2_norm, ricci_lbarlbar_closed, ricci_max, riemann_fd, riemann_split,
    ChristoffelMethod,
};
use crate::metric::{coord_metric, frame_det_and_volume, inverse_consistency, metric_frame};
use crate::model::{Field, ModelSolution};
use crate::num::rng::SplitMix64;
use crate::oracle;
use crate::profiles::{profile_bound_check, write_profile_csv, ProfileFamily, ProfileParams};
use crate::sobolev::{norm_report, write_ladder_csv, NormReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Verification suites in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Profiles,
    Metric,
    Curvature,
    Gauge,
    Norms,
    Causality,
    Model,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Profiles,
        Suite::Metric,
        Suite::Curvature,
        Suite::Gauge,
        Suite::Norms,
        Suite::Causality,
        Suite::Model,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Profiles => "profiles",
            Suite::Metric => "metric",
            Suite::Curvature => "curvature",
            Suite::Gauge => "gauge",
            Suite::Norms => "norms",
            Suite::Causality => "causality",
            Suite::Model => "model",
        }
    }

    pub fn from_name(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

/// Output format of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
    CsvBundle,
}

/// Run configuration (all tolerances pinned here).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub ode_tol: f64,
    pub quad_tol: f64,
    pub gauge_tol: f64,
    pub ricci_tol: f64,
    /// times scanned by norms / curvature / model suites
    pub t_list: Vec<f64>,
    /// interior sample grid density per axis (grid_n³ points)
    pub grid_n: usize,
    /// boundary scan grid (n_t, n_surface, n_angle), twice over (C1 and C2)
    pub scan_grid: (usize, usize, usize),
    pub suites: Vec<Suite>,
    pub allow_out_of_range: bool,
    /// golden-value directory; env WAVEGAUGE_GOLDEN_DIR overrides
    pub golden_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            epsilon: 0.1,
            alpha: 0.4,
            ode_tol: 1e-10,
            quad_tol: 1e-10,
            gauge_tol: 1e-9,
            ricci_tol: 1e-8,
            t_list: vec![0.0, 0.1, 0.25, 0.5],
            grid_n: 20,
            scan_grid: (10, 25, 20),
            suites: Suite::ALL.to_vec(),
            allow_out_of_range: false,
            golden_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ode_tol", self.ode_tol),
            ("quad_tol", self.quad_tol),
            ("gauge_tol", self.gauge_tol),
            ("ricci_tol", self.ricci_tol),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        if !self.allow_out_of_range {
            ProfileParams::new(self.epsilon, self.alpha)?;
        } else if !(self.epsilon >= 0.0) {
            return Err(Error::Config(format!(
                "epsilon = {} must be >= 0",
                self.epsilon
            )));
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites enabled".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> ProfileParams {
        ProfileParams::unchecked(self.epsilon, self.alpha)
    }

    fn enabled(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

/// One suite's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl SuiteResult {
    fn new() -> SuiteResult {
        SuiteResult {
            pass: true,
            metrics: BTreeMap::new(),
            failures: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.failures.push(what());
        }
    }
}

/// A norm-classification row for the JSON verdict list.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRow {
    pub component: String,
    pub t: f64,
    pub verdict: String,
    pub exponent: Option<f64>,
    pub limit: Option<f64>,
}

/// One acceptance-criterion row.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionRow {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub detail: String,
}

/// The full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub suites: BTreeMap<String, SuiteResult>,
    pub verdicts: Vec<VerdictRow>,
    pub acceptance: Vec<CriterionRow>,
    /// overall pass iff every enabled suite passes (drives the exit code)
    pub overall_pass: bool,
    /// all acceptance criteria rows pass
    pub acceptance_pass: bool,
    #[serde(skip)]
    pub wall_seconds: f64,
}

/// Golden values stored in golden/values.json.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GoldenValues {
    pub epsilon: f64,
    pub alpha: f64,
    pub ode_tol: f64,
    pub values: BTreeMap<String, f64>,
}

pub const GOLDEN_FILE: &str = "values.json";
pub const GOLDEN_REL_TOL: f64 = 1e-8;

/// Resolve the golden directory: env override, then the config path.
pub fn golden_dir(config: &RunConfig) -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("WAVEGAUGE_GOLDEN_DIR") {
        return Some(PathBuf::from(dir));
    }
    config.golden_dir.clone()
}

pub fn load_golden(dir: &Path) -> Result<GoldenValues> {
    let text = std::fs::read_to_string(dir.join(GOLDEN_FILE))?;
    Ok(serde_json::from_str(&text)?)
}

/// Recompute the golden values with the independent oracles (quadrature,
/// RK4 halving) plus the protocol-defined curvature ladder limits.
pub fn regen_golden(config: &RunConfig) -> Result<GoldenValues> {
    let p = config.params();
    let family = ProfileFamily::build(p, config.ode_tol)?;
    let mut values = BTreeMap::new();
    values.insert("chi1_at_1".into(), oracle::chi1_quadrature(1.0, p, 1e-12)?);
    values.insert("chi2_at_1".into(), oracle::chi2_quadrature(1.0, p, 1e-12)?);
    values.insert(
        "chi2_at_0.55".into(),
        oracle::chi2_quadrature(0.55, p, 1e-12)?,
    );
    values.insert(
        "chi2_at_0.3".into(),
        oracle::chi2_quadrature(0.3, p, 1e-12)?,
    );
    values.insert(
        "chitilde2_at_0.5".into(),
        oracle::chitilde2_rk4(0.5, p, 1e-10)?,
    );
    let sup = oracle::chitilde2_rk4(-1.0, p, 1e-10)?
        .abs()
        .max(oracle::chitilde2_rk4(1.0, p, 1e-10)?.abs());
    values.insert("chitilde2_sup_unit".into(), sup);
    // curvature norms are protocol-defined ladder limits; the oracle first
    // certifies the family against the RK4 route, then reuses the protocol
    for &s in &[0.25, 1.0, 2.5] {
        let gap = (oracle::chitilde2_rk4(s, p, 1e-10)? - family.chitilde2(s, 0)?.value).abs();
        if gap > 1e-8 {
            return Err(Error::Verification(format!(
                "family failed oracle certification at s = {s}: gap {gap:.3e}"
            )));
        }
    }
    for &t in &[0.0, 0.25, 0.5] {
        let n = curvature_l2_norm(t, &family, config.quad_tol)?;
        values.insert(format!("curvature_l2_t{t}"), n.norm);
    }
    Ok(GoldenValues {
        epsilon: p.epsilon,
        alpha: p.alpha,
        ode_tol: config.ode_tol,
        values,
    })
}

pub fn write_golden(dir: &Path, golden: &GoldenValues) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::File::create(dir.join(GOLDEN_FILE))?;
    writeln!(f, "{}", serde_json::to_string_pretty(golden)?)?;
    Ok(())
}

/// Compare freshly regenerated goldens against the stored file.
pub fn golden_drift(stored: &GoldenValues, fresh: &GoldenValues) -> Vec<(String, f64)> {
    let mut drift = Vec::new();
    for (k, v) in &fresh.values {
        if let Some(old) = stored.values.get(k) {
            let rel = (v - old).abs() / old.abs().max(1e-300);
            if rel > GOLDEN_REL_TOL {
                drift.push((k.clone(), rel));
            }
        } else {
            drift.push((k.clone(), f64::INFINITY));
        }
    }
    drift
}

/// Deterministic interior sample of D off the singular line.
pub fn sample_interior(n: usize, seed: u64) -> Vec<(f64, [f64; 3])> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t = rng.in_range(0.02, 0.85);
        let x1 = rng.in_range(t + 0.05, 3.0 - 2.0 * t - 0.05);
        let q = if x1 < 1.0 {
            (x1 - 1.0) * (x1 - 1.0)
        } else {
            (x1 - 1.0) * (x1 - 1.0) / 4.0
        };
        let room = (1.0 - t) * (1.0 - t) - q;
        if room <= 1e-4 {
            continue;
        }
        let rho = 2.0 * room.sqrt() * rng.next_f64().sqrt() * 0.98;
        let th = rng.in_range(0.0, std::f64::consts::TAU);
        out.push((t, [x1, rho * th.cos(), rho * th.sin()]));
    }
    out
}

/// Deterministic interior grid (n³ points) for the Ricci/gauge scans.
pub fn grid_interior(n: usize) -> Vec<(f64, [f64; 3])> {
    let mut out = Vec::with_capacity(n * n * n);
    for it in 0..n {
        let t = 0.02 + (0.80 - 0.02) * (it as f64) / (n as f64 - 1.0);
        for ix in 0..n {
            let f = (ix as f64 + 0.5) / n as f64;
            let x1 = (t + 0.03) * (1.0 - f) + (3.0 - 2.0 * t - 0.03) * f;
            let q = if x1 < 1.0 {
                (x1 - 1.0) * (x1 - 1.0)
            } else {
                (x1 - 1.0) * (x1 - 1.0) / 4.0
            };
            let room = ((1.0 - t) * (1.0 - t) - q).max(0.0);
            let rho_max = 2.0 * room.sqrt() * 0.95;
            for ir in 0..n {
                let g = (ir as f64 + 0.5) / n as f64;
                let rho = rho_max * g.sqrt();
                let th = std::f64::consts::TAU * (ir as f64 * 0.618_033_988_749_894_9).fract();
                out.push((t, [x1, rho * th.cos(), rho * th.sin()]));
            }
        }
    }
    out
}

fn random_symmetric(rng: &mut SplitMix64) -> FrameSymTensor2 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = rng.in_range(-1.0, 1.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    FrameSymTensor2::new(m, Variance::Covariant, 0.0, [0.0; 3]).unwrap()
}

fn suite_profiles(config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let bounds = profile_bound_check(family)?;
    r.metric("chitilde2_sup_unit", bounds.chitilde_sup);
    r.metric("chi1_energy", bounds.chi1_energy);
    r.metric("ode_cert_residual", family.certified_residual());
    r.check(family.certified_residual() <= config.ode_tol, || {
        format!(
            "ODE certification residual {} > {}",
            family.certified_residual(),
            config.ode_tol
        )
    });
    let mut worst = 0.0f64;
    for k in 1..=64 {
        let s = -2.0 + 4.0 * (k as f64 - 0.5) / 64.0;
        worst = worst.max(family.ode_residual(s)?.abs());
    }
    r.metric("ode_residual_grid64", worst);
    r.check(worst <= config.ode_tol, || {
        format!(
            "ODE residual {worst} on the 64-point grid exceeds {}",
            config.ode_tol
        )
    });
    r.metric("chitilde2_chi2_gap", family.chitilde_chi2_gap()?);
    // golden comparison when a golden file is present
    if let Some(dir) = golden_dir(config) {
        if let Ok(golden) = load_golden(&dir) {
            if golden.epsilon == config.epsilon && golden.alpha == config.alpha {
                let p = config.params();
                let pairs = [
                    ("chi1_at_1", family.chi1(1.0, 0)?.value),
                    ("chi2_at_1", family.chi2(1.0, 0)?.value),
                    ("chi2_at_0.55", family.chi2(0.55, 0)?.value),
                    ("chi2_at_0.3", family.chi2(0.3, 0)?.value),
                    ("chitilde2_at_0.5", family.chitilde2(0.5, 0)?.value),
                ];
                let _ = p;
                let mut checked = 0.0;
                for (key, got) in pairs {
                    if let Some(want) = golden.values.get(key) {
                        checked += 1.0;
                        let rel = (got - want).abs() / want.abs().max(1e-300);
                        r.check(rel <= 1e-7, || {
                            format!("golden drift on {key}: {got} vs {want} (rel {rel:.2e})")
                        });
                    }
                }
                r.metric("golden_checked", checked);
            }
        }
    }
    Ok(r)
}

fn suite_metric(_config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let pts = sample_interior(100, 0xA11CE);
    let mut det_gap = 0.0f64;
    let mut inv_gap = 0.0f64;
    let mut coord_det_gap = 0.0f64;
    let mut round_trip = 0.0f64;
    for &(t, x) in &pts {
        let (det, vol) = frame_det_and_volume(t, x, family)?;
        det_gap = det_gap.max((det + 4.0).abs()).max((vol - 2.0).abs());
        inv_gap = inv_gap.max(inverse_consistency(t, x, family)?);
        let c = coord_metric(t, x, family)?;
        coord_det_gap = coord_det_gap.max((det4(&c.m) + 1.0).abs());
        let back = crate::frame::coord_to_frame(&c);
        let g = metric_frame(t, x, family)?;
        for i in 0..4 {
            for j in 0..4 {
                round_trip = round_trip.max((back.m[i][j] - g.m[i][j]).abs());
            }
        }
    }
    r.metric("det_gap", det_gap);
    r.metric("inverse_identity_gap", inv_gap);
    r.metric("coord_det_gap", coord_det_gap);
    r.metric("round_trip_gap", round_trip);
    r.check(det_gap <= 1e-13, || {
        format!("frame det deviates from -4 by {det_gap:.3e}")
    });
    r.check(inv_gap <= 1e-13, || {
        format!("g g^-1 identity gap {inv_gap:.3e}")
    });
    r.check(coord_det_gap <= 1e-13, || {
        format!("coordinate det gap {coord_det_gap:.3e}")
    });
    r.check(round_trip <= 1e-14, || {
        format!("frame/coord round trip gap {round_trip:.3e}")
    });
    Ok(r)
}

/// The criterion-3 cross-checks plus Ricci/negative control.
fn suite_curvature(config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let start = Instant::now();
    let grid = grid_interior(config.grid_n);
    let mut worst_ric = 0.0f64;
    for &(t, x) in &grid {
        worst_ric = worst_ric.max(ricci_max(t, x, family)?);
    }
    r.metric("ricci_max", worst_ric);
    r.metric("ricci_grid_points", grid.len() as f64);
    r.metric("ricci_seconds", start.elapsed().as_secs_f64());
    r.check(worst_ric <= config.ricci_tol, || {
        format!("max |Ric| = {worst_ric:.3e} > {:.0e}", config.ricci_tol)
    });

    // closed vs numeric Christoffel at 50 points
    let pts = sample_interior(50, 0xC0FFEE);
    let mut gamma_gap = 0.0f64;
    for &(t, x) in &pts {
        let gc = christoffel(t, x, family, ChristoffelMethod::Closed)?;
        let gn = christoffel(t, x, family, ChristoffelMethod::Numeric)?;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    gamma_gap = gamma_gap.max((gc.lowered[a][b][c] - gn.lowered[a][b][c]).abs());
                }
            }
        }
    }
    r.metric("christoffel_cross_gap", gamma_gap);
    r.check(gamma_gap <= 1e-9, || {
        format!("closed vs numeric Christoffel gap {gamma_gap:.3e}")
    });

    // stencil Riemann convergence order at a subsample
    let mut orders = Vec::new();
    for &(t, x) in pts.iter().take(8) {
        if (x[0] - t).abs() < 0.12 {
            continue;
        }
        let exact = riemann_split(t, x, family)?.assembled;
        let mut errs = [0.0f64; 2];
        for (i, h) in [1e-2, 5e-3].into_iter().enumerate() {
            let fd = riemann_fd(t, x, family, h)?;
            for mu in 0..4 {
                for al in 0..4 {
                    for nu in 0..4 {
                        for be in 0..4 {
                            errs[i] =
                                errs[i].max((fd[mu][al][nu][be] - exact[mu][al][nu][be]).abs());
                        }
                    }
                }
            }
        }
        if errs[0] > 1e-11 {
            orders.push(crate::num::fd::observed_order(errs[0], errs[1]));
        }
    }
    let med = {
        let mut o = orders.clone();
        o.sort_by(|a, b| a.partial_cmp(b).unwrap());
        o.get(o.len() / 2).copied().unwrap_or(2.0)
    };
    r.metric("riemann_fd_order", med);
    r.check((1.5..2.6).contains(&med), || {
        format!("stencil Riemann order {med:.2}")
    });

    // zero structure of the assembled tensor
    let mut forbidden = 0.0f64;
    for &(t, x) in pts.iter().take(10) {
        forbidden = forbidden.max(riemann_split(t, x, family)?.max_forbidden_component());
    }
    r.metric("riemann_forbidden_max", forbidden);
    r.check(forbidden <= 1e-10, || {
        format!("L-indexed curvature component {forbidden:.3e}")
    });

    // L2 curvature norms per t (finite by construction of the ladder limit)
    for &t in &config.t_list {
        if !(0.0..1.0).contains(&t) {
            continue;
        }
        let n = curvature_l2_norm(t, family, config.quad_tol)?;
        r.metric(&format!("l2_norm_t{t}"), n.norm);
        r.metric(&format!("l2_fit_quality_t{t}"), n.fit_quality);
    }
    // epsilon scaling of the norm at the first positive t (or t = 0)
    let t_ref = config
        .t_list
        .iter()
        .copied()
        .find(|&t| (0.0..1.0).contains(&t))
        .unwrap_or(0.25);
    if config.epsilon > 0.0 {
        let half = ProfileFamily::build(
            ProfileParams::unchecked(config.epsilon / 2.0, config.alpha),
            config.ode_tol,
        )?;
        let n_half = curvature_l2_norm(t_ref, &half, config.quad_tol)?.norm;
        let n_full = curvature_l2_norm(t_ref, family, config.quad_tol)?.norm;
        let ratio = n_half / n_full;
        r.metric("l2_norm_half_eps_ratio", ratio);
        r.check((ratio - 0.5).abs() <= 0.05, || {
            format!("curvature norm eps-ratio {ratio:.4} not 0.5 within 10%")
        });
    }

    // negative control: chi2 in the chitilde2 slot must break Ricci flatness
    if config.epsilon > 0.0 {
        let broken = family.broken_ode_variant();
        let mut worst_broken = 0.0f64;
        for &(t, x) in pts.iter().take(20) {
            worst_broken = worst_broken.max(ricci_lbarlbar_closed(t, x, &broken)?.abs());
        }
        r.metric("broken_ode_ricci_max", worst_broken);
        r.check(worst_broken > 1e-4, || {
            format!("negative control too small: {worst_broken:.3e}")
        });
    }
    Ok(r)
}

fn suite_gauge(config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let start = Instant::now();
    let grid = grid_interior(config.grid_n);
    let mut worst = 0.0f64;
    let mut worst_dl = 0.0f64;
    for &(t, x) in &grid {
        let res = wave_gauge_residual(t, x, family)?;
        worst = worst.max(res.max_abs());
        worst_dl = worst_dl.max(res.d[0].abs());
    }
    r.metric("max_residual", worst);
    r.metric("d_l_max", worst_dl);
    r.metric("seconds", start.elapsed().as_secs_f64());
    r.check(worst <= config.gauge_tol, || {
        format!("wave gauge residual {worst:.3e} > {:.0e}", config.gauge_tol)
    });
    r.check(worst_dl == 0.0, || {
        format!("d_L = {worst_dl:.3e} must vanish identically")
    });

    let pts = sample_interior(100, 0xBEEF);
    let mut lowered_gap = 0.0f64;
    let mut trace_max = 0.0f64;
    for &(t, x) in &pts {
        let raised = wave_gauge_residual(t, x, family)?;
        let lowered = lowered_gauge_residual(t, x, family)?;
        let trace = gauge_trace_term(t, x, family)?;
        for ga in 0..4 {
            lowered_gap = lowered_gap.max((lowered[ga] + raised.d[ga]).abs());
            trace_max = trace_max.max(trace[ga].abs());
        }
    }
    r.metric("lowered_agreement_gap", lowered_gap);
    r.metric("trace_term_max", trace_max);
    r.check(lowered_gap <= 1e-12, || {
        format!("lowered/raised gauge gap {lowered_gap:.3e}")
    });
    r.check(trace_max <= 1e-12, || format!("trace term {trace_max:.3e}"));

    // linearized conditions on the ansatz cone
    let mut lin_max = 0.0f64;
    let mut rng = SplitMix64::new(0x11A);
    for _ in 0..50 {
        let t = rng.in_range(0.0, 0.6);
        let rad = rng.in_range(0.0, (1.0 - t) * 0.95);
        let th = rng.in_range(0.0, std::f64::consts::TAU);
        let ph = rng.in_range(0.0, std::f64::consts::PI);
        let x = [
            rad * ph.cos(),
            rad * ph.sin() * th.cos(),
            rad * ph.sin() * th.sin(),
        ];
        lin_max = lin_max.max(linearized_gauge_residual(t, x, family)?.max_abs());
    }
    r.metric("linearized_max", lin_max);
    r.check(lin_max <= 1e-12, || {
        format!("linearized gauge residual {lin_max:.3e}")
    });

    // P identity on 1000 random symmetric pairs, plus constrained reduction
    let mut rng = SplitMix64::new(0x9);
    let mut p_gap = 0.0f64;
    for _ in 0..1000 {
        let p = random_symmetric(&mut rng);
        let k = random_symmetric(&mut rng);
        p_gap = p_gap.max((p_form_coord(&p, &k) - p_form_nullframe(&p, &k)).abs());
    }
    r.metric("p_identity_gap", p_gap);
    r.check(p_gap <= 1e-13, || format!("P identity gap {p_gap:.3e}"));
    let mut red_gap = 0.0f64;
    for _ in 0..10 {
        let mut m = [[0.0; 4]; 4];
        let c22 = rng.in_range(-1.0, 1.0);
        m[2][2] = c22;
        m[3][3] = -c22;
        m[2][3] = rng.in_range(-1.0, 1.0);
        m[3][2] = m[2][3];
        m[1][1] = rng.in_range(-1.0, 1.0);
        m[0][1] = rng.in_range(-1.0, 1.0);
        m[1][0] = m[0][1];
        let dh = FrameSymTensor2::new(m, Variance::Covariant, 0.0, [0.0; 3]).unwrap();
        let (lhs, rhs) = p_semilinear_reduction(&dh)?;
        red_gap = red_gap.max((lhs - rhs).abs());
    }
    r.metric("p_reduction_gap", red_gap);
    r.check(red_gap <= 1e-13, || {
        format!("constrained P reduction gap {red_gap:.3e}")
    });
    Ok(r)
}

/// Expected classification per component: divergence exactly for components
/// carrying the bare t·chitilde2 term (00, 01, 11) at t != 0.
fn expect_divergent(component: &str, t: f64) -> bool {
    t != 0.0 && matches!(component, "00" | "01" | "11")
}

fn suite_norms(
    config: &RunConfig,
    family: &ProfileFamily,
    verdicts: &mut Vec<VerdictRow>,
    reports: &mut Vec<NormReport>,
) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let expected_exp = 4.0 * config.alpha - 1.0;
    for &t in &config.t_list {
        if !(-0.25..1.0).contains(&t) {
            r.check(false, || {
                format!("norms time t = {t} outside supported (-0.25, 1)")
            });
            continue;
        }
        let rep = norm_report(t, family, config.quad_tol)?;
        for comp in &rep.components {
            verdicts.push(VerdictRow {
                component: comp.component.clone(),
                t,
                verdict: match &comp.h2.verdict {
                    crate::sobolev::Verdict::Finite { .. } => "finite".into(),
                    crate::sobolev::Verdict::Divergent { .. } => "divergent".into(),
                    crate::sobolev::Verdict::Inconclusive => "inconclusive".into(),
                },
                exponent: comp.h2.exponent(),
                limit: comp.h2.limit(),
            });
            if t >= 0.0 {
                let want_div = config.epsilon > 0.0 && expect_divergent(&comp.component, t);
                if want_div {
                    r.check(comp.h2.is_divergent(), || {
                        format!(
                            "g_{} at t = {t} expected divergent, got {:?}",
                            comp.component, comp.h2.verdict
                        )
                    });
                    if let Some(p) = comp.h2.exponent() {
                        r.check((p - expected_exp).abs() / expected_exp <= 0.15, || {
                            format!(
                                "g_{} divergence exponent {p:.3} not within 15% of {expected_exp}",
                                comp.component
                            )
                        });
                    }
                } else {
                    r.check(comp.h2.is_finite(), || {
                        format!(
                            "g_{} at t = {t} expected finite, got {:?}",
                            comp.component, comp.h2.verdict
                        )
                    });
                }
            }
        }
        if t == 0.0 {
            let all_dt_finite = rep.components.iter().all(|c| c.dt_h1.is_finite());
            r.check(all_dt_finite, || {
                "some dt-g component not H1-finite at t = 0".into()
            });
            if let (Some(h2), Some(h1)) = (rep.h2_total, rep.h1_dt_total) {
                r.metric("h2_total_t0", h2);
                r.metric("h1_dt_total_t0", h1);
                r.metric("norm_total_t0", h2 + h1);
            }
        }
        reports.push(rep);
    }
    // eps-scaling of the t = 0 totals between eps/2 and eps
    if config.epsilon > 0.0 && config.t_list.contains(&0.0) {
        let half = ProfileFamily::build(
            ProfileParams::unchecked(config.epsilon / 2.0, config.alpha),
            config.ode_tol,
        )?;
        let rep_half = norm_report(0.0, &half, config.quad_tol)?;
        if let (Some(h2h), Some(h1h)) = (rep_half.h2_total, rep_half.h1_dt_total) {
            let full = r.metrics.get("norm_total_t0").copied().unwrap_or(f64::NAN);
            let ratio = (h2h + h1h) / full;
            r.metric("norm_total_half_eps_ratio", ratio);
            r.check((ratio - 0.5).abs() <= 0.1, || {
                format!("t = 0 norm eps-ratio {ratio:.4} not 0.5 within 20%")
            });
        }
    }
    Ok(r)
}

fn suite_causality(config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let (n_t, n_s, n_ang) = config.scan_grid;
    let rep = boundary_scan(family, n_t, n_s, n_ang)?;
    r.metric("points", rep.points as f64);
    r.metric("max_q", rep.max_q);
    r.metric("max_near_null_abs_u", rep.max_near_null_abs_u);
    r.metric("max_defining_residual", rep.max_defining_residual);
    r.metric("paper_expansion_gap", rep.max_paper_expansion_gap);
    r.check(rep.max_q <= 1e-10, || {
        format!(
            "causality violation: Q = {:.3e} at u = {:.3e} on {:?}",
            rep.max_q, rep.worst.u, rep.worst.piece
        )
    });
    r.check(rep.max_near_null_abs_u <= rep.u_window, || {
        format!("near-null point with |u| = {:.3e}", rep.max_near_null_abs_u)
    });
    r.check(rep.max_defining_residual <= 1e-12, || {
        format!(
            "boundary parameterization residual {:.3e}",
            rep.max_defining_residual
        )
    });
    Ok(r)
}

fn suite_model(config: &RunConfig, family: &ProfileFamily) -> Result<SuiteResult> {
    let mut r = SuiteResult::new();
    let m = ModelSolution::new(family);
    let mut rng = SplitMix64::new(0x50DE1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let t = rng.in_range(0.02, 0.9);
        let rad = rng.in_range(0.0, (1.0 - t) * 0.95);
        let th = rng.in_range(0.0, std::f64::consts::TAU);
        let x = [1.0 + rad * th.cos(), rad * th.sin(), 0.0];
        if (x[0] - t).abs() < 0.05 {
            continue;
        }
        let (r1, r2) = m.residual(t, x)?;
        worst = worst.max(r1.abs()).max(r2.abs());
    }
    r.metric("residual_max", worst);
    r.check(worst <= 1e-12, || format!("model residual {worst:.3e}"));

    // stencil cross-check at one interior point
    let (t, x) = (0.25, [0.8, 0.1, 0.0]);
    let lbar =
        m.eval(t, x, Field::Phi1, [1, 0, 0, 0])? - m.eval(t, x, Field::Phi1, [0, 1, 0, 0])?;
    let want = -lbar * lbar;
    let e1 = (m.box_phi2_stencil(t, x, 1e-2)? - want).abs();
    let e2 = (m.box_phi2_stencil(t, x, 5e-3)? - want).abs();
    // a rounding-level coarse error means the stencil is already exact
    // (epsilon = 0), leaving no order to observe
    let order =
        if e1 <= 1e-13 { 2.0 } else { crate::num::fd::observed_order(e1, e2) };
    r.metric("stencil_order", order);
    r.check((1.5..2.6).contains(&order), || {
        format!("model stencil order {order:.2}")
    });

    let deltas = crate::sobolev::default_delta_ladder();
    for &t in &config.t_list {
        if !(0.0..1.0).contains(&t) {
            continue;
        }
        let (v1, v2) = m.norm_profile(t, &deltas, config.quad_tol)?;
        r.check(v1.is_finite(), || {
            format!("phi1 ladder not finite at t = {t}")
        });
        if t == 0.0 || config.epsilon == 0.0 {
            r.check(v2.limit() == Some(0.0), || {
                format!("phi2 ladder at t = {t} must be zero")
            });
        } else {
            r.check(v2.is_divergent(), || {
                format!("phi2 ladder not divergent at t = {t}")
            });
            if let Some(p) = v2.exponent() {
                r.metric(&format!("phi2_exponent_t{t}"), p);
                let want = 4.0 * config.alpha - 1.0;
                r.check((p - want).abs() / want <= 0.15, || {
                    format!("phi2 exponent {p:.3} at t = {t} not within 15% of {want}")
                });
            }
        }
    }
    Ok(r)
}

fn acceptance_rows(
    report: &BTreeMap<String, SuiteResult>,
    config: &RunConfig,
) -> Vec<CriterionRow> {
    let get = |suite: &str, key: &str| -> Option<f64> {
        report.get(suite).and_then(|s| s.metrics.get(key)).copied()
    };
    let mut rows = Vec::new();
    let mut push = |id: u8, title: &str, pass: Option<bool>, detail: String| {
        rows.push(CriterionRow {
            id,
            title: title.to_string(),
            pass: pass.unwrap_or(false),
            detail: if pass.is_some() {
                detail
            } else {
                format!("SKIPPED: {detail}")
            },
        });
    };

    match (
        get("curvature", "ricci_max"),
        get("curvature", "ricci_seconds"),
    ) {
        (Some(m), Some(sec)) => push(
            1,
            "ricci-flatness",
            Some(m <= config.ricci_tol && sec <= 60.0),
            format!(
                "max |Ric| = {m:.3e} (tol {:.0e}), {sec:.1}s",
                config.ricci_tol
            ),
        ),
        _ => push(1, "ricci-flatness", None, "curvature suite disabled".into()),
    }
    match (
        get("gauge", "max_residual"),
        get("gauge", "d_l_max"),
        get("gauge", "seconds"),
    ) {
        (Some(m), Some(dl), Some(sec)) => push(
            2,
            "wave-gauge",
            Some(m <= 1e-9 && dl == 0.0 && sec <= 30.0),
            format!("max |d| = {m:.3e}, d_L = {dl:.1e}, {sec:.1}s"),
        ),
        _ => push(2, "wave-gauge", None, "gauge suite disabled".into()),
    }
    match (
        get("curvature", "christoffel_cross_gap"),
        get("curvature", "riemann_fd_order"),
    ) {
        (Some(g), Some(o)) => push(
            3,
            "closed-vs-numeric cross-checks",
            Some(g <= 1e-9 && (1.5..2.6).contains(&o)),
            format!("Christoffel gap {g:.3e}, stencil order {o:.2}"),
        ),
        _ => push(
            3,
            "closed-vs-numeric cross-checks",
            None,
            "curvature suite disabled".into(),
        ),
    }
    match get("metric", "det_gap") {
        Some(g) => push(
            4,
            "frame determinant -4",
            Some(g <= 1e-13),
            format!("gap {g:.3e}"),
        ),
        None => push(
            4,
            "frame determinant -4",
            None,
            "metric suite disabled".into(),
        ),
    }
    match report.get("norms") {
        Some(s) => {
            let class_ok = s.pass;
            let total = s.metrics.get("norm_total_t0").copied();
            let ratio = s.metrics.get("norm_total_half_eps_ratio").copied();
            match (total, ratio) {
                (Some(total), Some(ratio)) => {
                    let bound_ok = total <= 0.5;
                    let ratio_ok = (ratio - 0.5).abs() <= 0.1;
                    push(
                        5,
                        "norm dichotomy",
                        Some(class_ok && bound_ok && ratio_ok),
                        format!(
                            "classifications {}, total t=0 = {total:.4} (bound 0.5: {}), eps-ratio = {ratio:.4}",
                            if class_ok { "ok" } else { "FAILED" },
                            if bound_ok { "ok" } else { "FAILED" },
                        ),
                    );
                }
                _ => push(5, "norm dichotomy", None, "requires t = 0 in the t list".into()),
            }
        }
        None => push(5, "norm dichotomy", None, "norms suite disabled".into()),
    }
    match report.get("model") {
        Some(s) => push(
            6,
            "model system",
            Some(s.pass),
            format!(
                "residual {:.3e}, stencil order {:.2}",
                s.metrics.get("residual_max").copied().unwrap_or(f64::NAN),
                s.metrics.get("stencil_order").copied().unwrap_or(f64::NAN)
            ),
        ),
        None => push(6, "model system", None, "model suite disabled".into()),
    }
    match get("curvature", "l2_norm_half_eps_ratio") {
        Some(ratio) => {
            let finite = config
                .t_list
                .iter()
                .filter(|&&t| (0.0..1.0).contains(&t))
                .all(|t| get("curvature", &format!("l2_norm_t{t}")).is_some_and(f64::is_finite));
            push(
                7,
                "curvature smallness",
                Some(finite && (ratio - 0.5).abs() <= 0.05),
                format!("norms finite: {finite}, eps-ratio {ratio:.4}"),
            );
        }
        None => push(
            7,
            "curvature smallness",
            None,
            "curvature suite disabled".into(),
        ),
    }
    match (
        get("causality", "max_q"),
        get("causality", "max_near_null_abs_u"),
    ) {
        (Some(q), Some(u)) => push(
            8,
            "causal boundary",
            Some(q <= 1e-10 && u <= 1e-4),
            format!("max Q = {q:.3e}, near-null |u| <= {u:.3e}"),
        ),
        _ => push(
            8,
            "causal boundary",
            None,
            "causality suite disabled".into(),
        ),
    }
    match (
        get("gauge", "p_identity_gap"),
        get("gauge", "p_reduction_gap"),
    ) {
        (Some(g), Some(rg)) => push(
            9,
            "P-form identity",
            Some(g <= 1e-13 && rg <= 1e-13),
            format!("identity gap {g:.3e}, reduction gap {rg:.3e}"),
        ),
        _ => push(9, "P-form identity", None, "gauge suite disabled".into()),
    }
    match get("curvature", "broken_ode_ricci_max") {
        Some(m) => push(
            10,
            "negative control",
            Some(m > 1e-4),
            format!("broken-ODE |Ric_LbarLbar| = {m:.3e} > 1e-4"),
        ),
        None => push(
            10,
            "negative control",
            None,
            "curvature suite disabled".into(),
        ),
    }
    rows
}

/// Execute the enabled suites in dependency order.
pub fn run(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let family = ProfileFamily::build(config.params(), config.ode_tol)?;
    let mut suites = BTreeMap::new();
    let mut verdicts = Vec::new();
    let mut norm_reports = Vec::new();
    for suite in Suite::ALL {
        if !config.enabled(suite) {
            continue;
        }
        let t0 = Instant::now();
        let mut result = match suite {
            Suite::Profiles => suite_profiles(config, &family)?,
            Suite::Metric => suite_metric(config, &family)?,
            Suite::Curvature => suite_curvature(config, &family)?,
            Suite::Gauge => suite_gauge(config, &family)?,
            Suite::Norms => suite_norms(config, &family, &mut verdicts, &mut norm_reports)?,
            Suite::Causality => suite_causality(config, &family)?,
            Suite::Model => suite_model(config, &family)?,
        };
        result.wall_seconds = t0.elapsed().as_secs_f64();
        suites.insert(suite.name().to_string(), result);
    }
    let acceptance = acceptance_rows(&suites, config);
    let overall_pass = suites.values().all(|s| s.pass);
    let acceptance_pass = acceptance.iter().all(|c| c.pass);
    Ok(VerificationReport {
        config: config.clone(),
        suites,
        verdicts,
        acceptance,
        overall_pass,
        acceptance_pass,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Render the text report (one line per acceptance criterion included).
pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(
        out,
        "wavegauge verification  (epsilon = {}, alpha = {})",
        report.config.epsilon, report.config.alpha
    );
    for (name, s) in &report.suites {
        let _ = writeln!(
            out,
            "suite {name:<10} {}  [{:.1}s]",
            if s.pass { "PASS" } else { "FAIL" },
            s.wall_seconds
        );
        for (k, v) in &s.metrics {
            let _ = writeln!(out, "    {k} = {v:.6e}");
        }
        for f in &s.failures {
            let _ = writeln!(out, "    FAILURE: {f}");
        }
    }
    let _ = writeln!(out, "acceptance criteria:");
    for c in &report.acceptance {
        let _ = writeln!(
            out,
            "  criterion {:02} {:<32} {}  ({})",
            c.id,
            c.title,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let _ = writeln!(
        out,
        "overall: suites {}, acceptance {}  [{:.1}s total]",
        if report.overall_pass { "PASS" } else { "FAIL" },
        if report.acceptance_pass {
            "PASS"
        } else {
            "FAIL"
        },
        report.wall_seconds
    );
    out
}

/// Emit the report in the requested format under `out_dir`. Returns the
/// paths written.
pub fn emit(report: &VerificationReport, format: Format, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match format {
        Format::Json => {
            let path = out_dir.join("report.json");
            std::fs::write(&path, serde_json::to_string_pretty(report)?)?;
            written.push(path);
        }
        Format::Text => {
            let path = out_dir.join("report.txt");
            std::fs::write(&path, render_text(report))?;
            written.push(path);
        }
        Format::CsvBundle => {
            let family = ProfileFamily::build(report.config.params(), report.config.ode_tol)?;
            let p = out_dir.join("profiles.csv");
            write_profile_csv(&family, 400, &mut std::fs::File::create(&p)?)?;
            written.push(p);
            let model = ModelSolution::new(&family);
            for &t in &report.config.t_list {
                if !(0.0..1.0).contains(&t) {
                    continue;
                }
                let p = out_dir.join(format!("model_ladders_t{t}.csv"));
                model.write_ladder_csv(
                    t,
                    report.config.quad_tol,
                    &mut std::fs::File::create(&p)?,
                )?;
                written.push(p);
                let rep = norm_report(t, &family, report.config.quad_tol)?;
                let p = out_dir.join(format!("norm_ladders_t{t}.csv"));
                write_ladder_csv(&rep, &mut std::fs::File::create(&p)?)?;
                written.push(p);
            }
            let p = out_dir.join("causality_scan.csv");
            let (n_t, n_s, n_ang) = report.config.scan_grid;
            write_scan_csv(
                &family,
                n_t.min(6),
                n_s.min(12),
                n_ang.min(8),
                &mut std::fs::File::create(&p)?,
            )?;
            written.push(p);
            let p = out_dir.join("curvature_scan.csv");
            write_curvature_scan_csv(
                &family,
                &report.config.t_list,
                &mut std::fs::File::create(&p)?,
            )?;
            written.push(p);
        }
    }
    Ok(written)
}

/// CSV of the curvature block along an s-grid per time: t, s, R_{2Lbar2Lbar},
/// R_{3Lbar3Lbar}, |R|² density.
pub fn write_curvature_scan_csv<W: Write>(
    family: &ProfileFamily,
    t_list: &[f64],
    w: &mut W,
) -> Result<()> {
    writeln!(w, "t,s,R_2Lb2Lb,R_3Lb3Lb,density")?;
    for &t in t_list {
        if !(0.0..1.0).contains(&t) {
            continue;
        }
        for k in 1..=200 {
            let s = 3.0 * (1.0 - t) * (k as f64) / 201.0;
            if s < 1e-6 {
                continue;
            }
            let split = riemann_split(t, [t + s, 0.0, 0.0], family)?;
            let dens = crate::geometry::curvature_density(s, family)?;
            writeln!(
                w,
                "{t:.4},{s:.6},{:.10e},{:.10e},{:.10e}",
                split.block(0, 0),
                split.block(1, 1),
                dens
            )?;
        }
    }
    Ok(())
}

/// JSON dump of the tensors at a point (--dump-point).
pub fn dump_point(t: f64, x: [f64; 3], config: &RunConfig) -> Result<serde_json::Value> {
    let family = ProfileFamily::build(config.params(), config.ode_tol)?;
    let g = metric_frame(t, x, &family)?;
    let gi = crate::metric::inverse_metric_frame(t, x, &family)?;
    let names = crate::frame::COMPONENT_NAMES;
    let to_map = |m: &[[f64; 4]; 4]| {
        let mut map = BTreeMap::new();
        for i in 0..4 {
            for j in i..4 {
                map.insert(names[i][j].to_string(), m[i][j]);
            }
        }
        map
    };
    let coord = frame_to_coord(&g);
    let (det, vol) = frame_det_and_volume(t, x, &family)?;
    let mut ric_max = serde_json::Value::Null;
    if (x[0] - t).abs() > 1e-6 {
        ric_max = serde_json::json!(ricci_max(t, x, &family)?);
    }
    Ok(serde_json::json!({
        "point": {"t": t, "x": x, "s": x[0] - t},
        "metric_frame": to_map(&g.m),
        "inverse_frame": to_map(&gi.m),
        "metric_coord": coord.m,
        "frame_det": det,
        "sqrt_abs_det": vol,
        "ricci_max": ric_max,
        "wave_gauge_residual": wave_gauge_residual(t, x, &family)?.d,
    }))
}
