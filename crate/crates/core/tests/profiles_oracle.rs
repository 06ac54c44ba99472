//! Quadrature- and ODE-oracle cross-checks of the profile evaluators,
//! plus the difference-stencil and integrability-split verifications.

mod common;

use wavegauge::num::fd::observed_order;
use wavegauge::oracle;
use wavegauge::profiles::{chi1_eval, chi2_eval, ProfileFamily, ProfileParams};

fn params() -> ProfileParams {
    ProfileParams::default()
}

fn family() -> ProfileFamily {
    ProfileFamily::build(params(), 1e-10).unwrap()
}

#[test]
fn chi1_order0_matches_quadrature_oracle() {
    // golden value computed by adaptive quadrature at 1e-12 with the
    // substitution u = -log(r/4); frozen, and recomputed live
    let frozen = 0.139_215_361_594_486_6;
    let live = oracle::chi1_quadrature(1.0, params(), 1e-12).unwrap();
    assert!((live - frozen).abs() < 1e-12);
    let closed = chi1_eval(1.0, 0, params()).unwrap().value;
    assert!(
        (closed - frozen).abs() < 1e-12,
        "closed {closed} vs frozen {frozen}"
    );
}

#[test]
fn chi2_order0_matches_quadrature_oracle() {
    let frozen = 0.039_636_559_504_573_45;
    let closed = chi2_eval(1.0, 0, params()).unwrap().value;
    assert!((closed - frozen).abs() < 1e-12);
    for &s in &[0.3, 0.55, 2.0, -1.2, 3.5] {
        let live = oracle::chi2_quadrature(s, params(), 1e-12).unwrap();
        let c = chi2_eval(s, 0, params()).unwrap().value;
        assert!((live - c).abs() < 1e-12, "s = {s}: {live} vs {c}");
    }
}

#[test]
fn fundamental_theorem_second_order_in_h() {
    // central difference of chi1(., 0) converges at order 2 to chi1(., 1)
    let p = params();
    for &s in &[0.4, 1.1, 2.3, -0.9] {
        let exact = chi1_eval(s, 1, p).unwrap().value;
        let df = |h: f64| {
            let a = chi1_eval(s + h, 0, p).unwrap().value;
            let b = chi1_eval(s - h, 0, p).unwrap().value;
            ((a - b) / (2.0 * h) - exact).abs()
        };
        let order = observed_order(df(1e-2), df(5e-3));
        assert!((1.6..2.4).contains(&order), "s = {s}: order {order}");
    }
}

#[test]
fn chitilde2_against_rk4_oracle() {
    // high-order adaptive path vs classical fixed-step RK4 with halving
    let fam = family();
    for &s in &[0.5, 1.5, -2.0, 3.2] {
        let o = oracle::chitilde2_rk4(s, params(), 1e-10).unwrap();
        let i = fam.chitilde2(s, 0).unwrap().value;
        assert!((o - i).abs() < 2e-9, "s = {s}: oracle {o}, impl {i}");
    }
}

#[test]
fn bound_report_sup_matches_ode_oracle() {
    // the reported sup over |s| <= 1 sits at the left endpoint
    let fam = family();
    let rep = wavegauge::profiles::profile_bound_check(&fam).unwrap();
    let at_minus_1 = oracle::chitilde2_rk4(-1.0, params(), 1e-10).unwrap().abs();
    assert!((rep.chitilde_sup - at_minus_1).abs() < 1e-8);
}

#[test]
fn integrability_split() {
    // ∫_δ^1 (chi1'')² s ds converges (Cauchy increments shrink);
    // ∫_δ^1 (chi2'')² s ds grows like |log δ|^{4α-1}
    let p = params();
    let int_from = |f: &dyn Fn(f64) -> f64, delta: f64| {
        wavegauge::quad_adaptive(|s| Ok(f(s) * s), delta, 1.0, 1e-11)
            .unwrap()
            .value
    };
    let c1dd = |s: f64| {
        let v = chi1_eval(s, 2, p).unwrap().value;
        v * v
    };
    let c2dd = |s: f64| {
        let v = chi2_eval(s, 2, p).unwrap().value;
        v * v
    };
    let deltas: Vec<f64> = (6..=26).map(|k| (2.0f64).powi(-k)).collect();
    let i1: Vec<f64> = deltas.iter().map(|&d| int_from(&c1dd, d)).collect();
    let i2: Vec<f64> = deltas.iter().map(|&d| int_from(&c2dd, d)).collect();
    // chi1 branch: increments decrease monotonically
    let inc1: Vec<f64> = i1.windows(2).map(|w| w[1] - w[0]).collect();
    for w in inc1.windows(2) {
        assert!(w[1] < w[0] * 1.001, "chi1'' increments must shrink: {w:?}");
    }
    // chi2 branch: I(δ)/|log δ|^{4a-1} approaches a positive constant
    let ratios: Vec<f64> = deltas
        .iter()
        .zip(&i2)
        .map(|(&d, &v)| v / (-d.ln()).powf(4.0 * p.alpha - 1.0))
        .collect();
    let first = ratios[2];
    let last = *ratios.last().unwrap();
    assert!(
        last > 0.0 && (last / first - 1.0).abs() < 0.35,
        "ratios {first} -> {last}"
    );
    // and the magnitudes genuinely grow
    assert!(i2.last().unwrap() > &(i2[0] * 1.5));
}

#[test]
fn epsilon_zero_profiles_vanish() {
    let p = ProfileParams::unchecked(0.0, 0.4);
    let fam = ProfileFamily::build(p, 1e-10).unwrap();
    for &s in &[0.0, 0.5, -1.0] {
        assert_eq!(fam.chi1(s, 0).unwrap().value, 0.0);
        assert_eq!(fam.chi1(s, 1).unwrap().value, 0.0);
        assert_eq!(fam.chitilde2(s, 0).unwrap().value, 0.0);
    }
}

#[test]
fn family_supports_concurrent_reads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<ProfileFamily>();
    let fam = std::sync::Arc::new(family());
    let handles: Vec<_> = (0..4)
        .map(|k| {
            let fam = fam.clone();
            std::thread::spawn(move || {
                let mut acc = 0.0;
                for i in 1..200 {
                    let s = (k as f64 + 1.0) * 0.004 * i as f64;
                    acc += fam.chitilde2(s, 0).unwrap().value;
                }
                acc
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap().is_finite());
    }
}
