//! The explicit metric in the null frame, its inverse, determinant facts,
//! exact partial derivatives, and the linearized ansatz.
//!
//! Frame components (order L, Lbar, 2, 3), with s = x1 - t:
//!
//!   g_{L Lbar} = -2,           g_{Lbar Lbar} = -t chitilde2,
//!   g_{22} = 1 + chi1,         g_{33} = (1 + chi1)^{-1},
//!   g_{A Lbar} = -x_A chi_{2A} / 4,  chi_{2A} = chi_{1A} chitilde2,
//!
//! and the inverse
//!
//!   g^{L Lbar} = -1/2,   g^{AB} = delta_{AB} chi_{1A}^{-1},   g^{Lbar Lbar} = g^{Lbar A} = 0,
//!   g^{L A} = -x_A chitilde2 / 8,
//!   g^{LL} = t chitilde2 / 4 + (x2² (1+chi1) + x3² (1+chi1)^{-1}) chitilde2² / 64.

use crate::error::{Error, Result};
use crate::frame::{det4, frame_to_coord, inverse4, CoordSymTensor2, FrameSymTensor2, Variance};
use crate::profiles::ProfileFamily;
use crate::terms::{
    Dir, Term, TermSum, A, A_CHI_T, A_CHI_T2, A_INV, A_INV_CHI_T, A_INV_CHI_T2, CHI_1, CHI_2, CHI_T,
};
use std::sync::OnceLock;

type Table = [[TermSum; 4]; 4];

fn sym_set(t: &mut Table, i: usize, j: usize, v: TermSum) {
    t[i][j] = v.clone();
    if i != j {
        t[j][i] = v;
    }
}

fn empty_table() -> Table {
    std::array::from_fn(|_| std::array::from_fn(|_| TermSum::zero()))
}

/// Covariant frame components of the metric (Table 1).
pub fn metric_terms() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut g = empty_table();
        sym_set(&mut g, 0, 1, TermSum::constant(-2.0));
        sym_set(
            &mut g,
            1,
            1,
            TermSum::new(vec![Term::new(-1.0, 1, 0, 0, CHI_T)]),
        );
        sym_set(
            &mut g,
            1,
            2,
            TermSum::new(vec![Term::new(-0.25, 0, 1, 0, A_CHI_T)]),
        );
        sym_set(
            &mut g,
            1,
            3,
            TermSum::new(vec![Term::new(-0.25, 0, 0, 1, A_INV_CHI_T)]),
        );
        sym_set(&mut g, 2, 2, TermSum::new(vec![Term::new(1.0, 0, 0, 0, A)]));
        sym_set(
            &mut g,
            3,
            3,
            TermSum::new(vec![Term::new(1.0, 0, 0, 0, A_INV)]),
        );
        g
    })
}

/// Contravariant frame components of the inverse metric (Table 2).
pub fn inverse_metric_terms() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut g = empty_table();
        sym_set(
            &mut g,
            0,
            0,
            TermSum::new(vec![
                Term::new(0.25, 1, 0, 0, CHI_T),
                Term::new(1.0 / 64.0, 0, 2, 0, A_CHI_T2),
                Term::new(1.0 / 64.0, 0, 0, 2, A_INV_CHI_T2),
            ]),
        );
        sym_set(&mut g, 0, 1, TermSum::constant(-0.5));
        sym_set(
            &mut g,
            0,
            2,
            TermSum::new(vec![Term::new(-0.125, 0, 1, 0, CHI_T)]),
        );
        sym_set(
            &mut g,
            0,
            3,
            TermSum::new(vec![Term::new(-0.125, 0, 0, 1, CHI_T)]),
        );
        sym_set(
            &mut g,
            2,
            2,
            TermSum::new(vec![Term::new(1.0, 0, 0, 0, A_INV)]),
        );
        sym_set(&mut g, 3, 3, TermSum::new(vec![Term::new(1.0, 0, 0, 0, A)]));
        g
    })
}

/// The linearized h-ansatz (chi2-based, not chitilde2).
pub fn ansatz_terms() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut h = empty_table();
        sym_set(
            &mut h,
            1,
            1,
            TermSum::new(vec![Term::new(-1.0, 1, 0, 0, CHI_2)]),
        );
        sym_set(
            &mut h,
            1,
            2,
            TermSum::new(vec![Term::new(-0.25, 0, 1, 0, CHI_2)]),
        );
        sym_set(
            &mut h,
            1,
            3,
            TermSum::new(vec![Term::new(-0.25, 0, 0, 1, CHI_2)]),
        );
        sym_set(
            &mut h,
            2,
            2,
            TermSum::new(vec![Term::new(1.0, 0, 0, 0, CHI_1)]),
        );
        sym_set(
            &mut h,
            3,
            3,
            TermSum::new(vec![Term::new(-1.0, 0, 0, 0, CHI_1)]),
        );
        h
    })
}

/// Coordinate components of g - m as term sums: C = M^{-T} F M^{-1} with the
/// constant basis change, minus the Minkowski constants.
pub fn coord_metric_minus_minkowski_terms() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        const MINV: [[f64; 4]; 4] = [
            [0.5, 0.5, 0.0, 0.0],
            [0.5, -0.5, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let f = metric_terms();
        let mut out = empty_table();
        let mink = [-1.0, 1.0, 1.0, 1.0];
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = TermSum::zero();
                for a in 0..4 {
                    for b in 0..4 {
                        let c = MINV[a][mu] * MINV[b][nu];
                        if c != 0.0 {
                            acc = acc.plus(&f[a][b].scaled(c));
                        }
                    }
                }
                if mu == nu {
                    acc = acc.plus(&TermSum::constant(-mink[mu]));
                }
                // drop cancelled constants (e.g. g_00 - (-1) has none left)
                let collapsed: f64 = acc
                    .0
                    .iter()
                    .filter(|t| t.factor.is_one() && t.pt == 0 && t.p2 == 0 && t.p3 == 0)
                    .map(|t| t.coef)
                    .sum();
                let mut v: Vec<Term> = acc
                    .0
                    .into_iter()
                    .filter(|t| !(t.factor.is_one() && t.pt == 0 && t.p2 == 0 && t.p3 == 0))
                    .collect();
                if collapsed != 0.0 {
                    v.push(Term::new(collapsed, 0, 0, 0, crate::terms::ONE));
                }
                out[mu][nu] = TermSum::new(v);
            }
        }
        out
    })
}

fn eval_table(table: &Table, t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[[f64; 4]; 4]> {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in table.iter().enumerate() {
        for (j, ts) in row.iter().enumerate() {
            m[i][j] = ts.eval(family, t, x)?;
        }
    }
    Ok(m)
}

/// Covariant frame metric at a point (Table 1).
pub fn metric_frame(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<FrameSymTensor2> {
    let m = eval_table(metric_terms(), t, x, family)?;
    FrameSymTensor2::new(m, Variance::Covariant, t, x)
}

/// Contravariant frame inverse metric at a point (Table 2).
pub fn inverse_metric_frame(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
) -> Result<FrameSymTensor2> {
    let m = eval_table(inverse_metric_terms(), t, x, family)?;
    FrameSymTensor2::new(m, Variance::Contravariant, t, x)
}

/// Determinant of the frame component matrix and sqrt|det|.
///
/// Cofactor structure makes it the constant -4 (so sqrt|g| = 2) for every
/// profile family; returned from the numeric matrix, not assumed.
pub fn frame_det_and_volume(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<(f64, f64)> {
    let g = metric_frame(t, x, family)?;
    let d = det4(&g.m);
    Ok((d, d.abs().sqrt()))
}

/// Coordinate components of the metric.
pub fn coord_metric(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<CoordSymTensor2> {
    Ok(frame_to_coord(&metric_frame(t, x, family)?))
}

/// Coordinate components of the inverse metric.
pub fn coord_inverse_metric(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
) -> Result<CoordSymTensor2> {
    Ok(frame_to_coord(&inverse_metric_frame(t, x, family)?))
}

fn dir_slot(dir: Dir) -> usize {
    match dir {
        Dir::T => 0,
        Dir::X1 => 1,
        Dir::X2 => 2,
        Dir::X3 => 3,
        Dir::L => 4,
        Dir::Lbar => 5,
    }
}

pub const FRAME_DIRS: [Dir; 4] = [Dir::L, Dir::Lbar, Dir::X2, Dir::X3];

fn first_deriv_tables() -> &'static [Table; 6] {
    static T: OnceLock<[Table; 6]> = OnceLock::new();
    T.get_or_init(|| {
        let dirs = [Dir::T, Dir::X1, Dir::X2, Dir::X3, Dir::L, Dir::Lbar];
        dirs.map(|d| {
            let g = metric_terms();
            let mut out = empty_table();
            for i in 0..4 {
                for j in 0..4 {
                    out[i][j] = g[i][j].deriv(d);
                }
            }
            out
        })
    })
}

fn second_deriv_tables() -> &'static [[Table; 4]; 4] {
    static T: OnceLock<[[Table; 4]; 4]> = OnceLock::new();
    T.get_or_init(|| {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let g = metric_terms();
                let mut out = empty_table();
                for i in 0..4 {
                    for j in 0..4 {
                        out[i][j] = g[i][j].deriv(FRAME_DIRS[a]).deriv(FRAME_DIRS[b]);
                    }
                }
                out
            })
        })
    })
}

/// Exact first derivative of a frame metric component in any direction.
pub fn metric_partial(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
    dir: Dir,
    target: (usize, usize),
) -> Result<f64> {
    first_deriv_tables()[dir_slot(dir)][target.0][target.1].eval(family, t, x)
}

/// Exact second derivative along two frame directions (indices into
/// [`FRAME_DIRS`]). Singular at s = 0 when a profile second derivative is hit.
pub fn metric_partial2_frame(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
    d1: usize,
    d2: usize,
    target: (usize, usize),
) -> Result<f64> {
    second_deriv_tables()[d1][d2][target.0][target.1].eval(family, t, x)
}

/// Exact first derivative of an inverse-metric (Table 2) component.
pub fn inverse_metric_partial(
    t: f64,
    x: [f64; 3],
    family: &ProfileFamily,
    dir: Dir,
    target: (usize, usize),
) -> Result<f64> {
    inverse_metric_terms()[target.0][target.1]
        .deriv(dir)
        .eval(family, t, x)
}

/// The section-2 linearized ansatz h_{YZ} on the cone |x| < 1 - t.
pub fn linearized_ansatz(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<FrameSymTensor2> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r >= 1.0 - t {
        return Err(Error::Domain(format!(
            "ansatz point |x| = {r} outside the cone 1 - t = {}",
            1.0 - t
        )));
    }
    let m = eval_table(ansatz_terms(), t, x, family)?;
    FrameSymTensor2::new(m, Variance::Covariant, t, x)
}

/// g g^{-1} deviation from the identity, max over entries.
pub fn inverse_consistency(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<f64> {
    let g = metric_frame(t, x, family)?;
    let gi = inverse_metric_frame(t, x, family)?;
    let prod = crate::frame::matmul(&g.m, &gi.m);
    let mut worst = 0.0f64;
    for (i, row) in prod.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    Ok(worst)
}

/// Numeric inversion of Table 1 for cross-checks against Table 2.
pub fn inverse_by_solve(t: f64, x: [f64; 3], family: &ProfileFamily) -> Result<[[f64; 4]; 4]> {
    inverse4(&metric_frame(t, x, family)?.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ProfileParams;

    fn fam() -> ProfileFamily {
        ProfileFamily::build(ProfileParams::default(), 1e-10).unwrap()
    }

    #[test]
    fn minkowski_limit() {
        let zero = ProfileFamily::build(ProfileParams::unchecked(0.0, 0.4), 1e-10).unwrap();
        let g = metric_frame(0.3, [0.8, 0.1, -0.2], &zero).unwrap();
        assert_eq!(g.m, crate::frame::minkowski_frame());
        let gi = inverse_metric_frame(0.3, [0.8, 0.1, -0.2], &zero).unwrap();
        assert_eq!(gi.m, crate::frame::minkowski_frame_inv());
    }

    #[test]
    fn g_llbar_is_minus_two_everywhere() {
        let f = fam();
        for &(t, x) in &[
            (0.0, [0.5, 0.2, 0.1]),
            (0.4, [1.7, -0.5, 0.9]),
            (0.7, [0.9, 0.0, 0.0]),
        ] {
            let g = metric_frame(t, x, &f).unwrap();
            assert_eq!(g.m[0][1], -2.0);
            assert_eq!(g.m[0][0], 0.0);
            assert_eq!(g.m[0][2], 0.0);
        }
    }

    #[test]
    fn on_axis_components() {
        // x2 = x3 = 0: g_{A Lbar} = 0 and g_22 = 1 + chi1(s)
        let f = fam();
        let (t, x) = (0.2, [0.9, 0.0, 0.0]);
        let g = metric_frame(t, x, &f).unwrap();
        assert_eq!(g.m[1][2], 0.0);
        assert_eq!(g.m[1][3], 0.0);
        let want = 1.0 + f.chi1(x[0] - t, 0).unwrap().value;
        assert!((g.m[2][2] - want).abs() < 1e-16);
    }

    #[test]
    fn table2_matches_numeric_inverse() {
        let f = fam();
        let (t, x) = (0.3, [1.1, 0.4, -0.6]);
        let gi = inverse_metric_frame(t, x, &f).unwrap();
        let solved = inverse_by_solve(t, x, &f).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((gi.m[i][j] - solved[i][j]).abs() < 1e-13, "({i},{j})");
            }
        }
        assert!(inverse_consistency(t, x, &f).unwrap() < 1e-13);
        assert_eq!(gi.m[0][1], -0.5);
        assert_eq!(gi.m[1][1], 0.0);
        assert_eq!(gi.m[1][2], 0.0);
    }

    #[test]
    fn frame_determinant_is_minus_four() {
        let f = fam();
        for &(t, x) in &[
            (0.0, [0.5, 0.3, 0.1]),
            (0.45, [1.3, -0.2, 0.8]),
            (0.8, [0.9, 0.05, 0.0]),
        ] {
            let (det, vol) = frame_det_and_volume(t, x, &f).unwrap();
            assert!((det + 4.0).abs() < 1e-13, "det = {det}");
            assert!((vol - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn coordinate_identities() {
        // g_00 = -1 - t chitilde2 / 4, g_01 = t chitilde2 / 4, det coord = -1
        let f = fam();
        let (t, x) = (0.35, [1.0, 0.3, -0.1]);
        let c = coord_metric(t, x, &f).unwrap();
        let ct = f.chitilde2(x[0] - t, 0).unwrap().value;
        assert!((c.m[0][0] - (-1.0 - t * ct / 4.0)).abs() < 1e-15);
        assert!((c.m[0][1] - t * ct / 4.0).abs() < 1e-15);
        assert!((det4(&c.m) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn round_trip_frame_coord_frame() {
        let f = fam();
        let g = metric_frame(0.25, [0.9, 0.2, 0.4], &f).unwrap();
        let back = crate::frame::coord_to_frame(&frame_to_coord(&g));
        for i in 0..4 {
            for j in 0..4 {
                assert!((back.m[i][j] - g.m[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn partial_examples_from_the_construction() {
        let f = fam();
        let (t, x) = (0.3, [1.0, 0.5, -0.2]);
        let s = x[0] - t;
        // ∂_L g_{A Lbar} = 0
        assert_eq!(metric_partial(t, x, &f, Dir::L, (2, 1)).unwrap(), 0.0);
        // ∂_L g_{Lbar Lbar} = -chitilde2
        let got = metric_partial(t, x, &f, Dir::L, (1, 1)).unwrap();
        assert!((got + f.chitilde2(s, 0).unwrap().value).abs() < 1e-16);
        // ∂_{x2} g_{2 Lbar} = -(1+chi1) chitilde2 / 4
        let got = metric_partial(t, x, &f, Dir::X2, (2, 1)).unwrap();
        let want = -0.25 * (1.0 + f.chi1(s, 0).unwrap().value) * f.chitilde2(s, 0).unwrap().value;
        assert!((got - want).abs() < 1e-16);
    }

    #[test]
    fn det_derivative_identity_right_side_vanishes() {
        // eq: ∂_alpha |g| = |g| g^{mu nu} ∂_alpha g_{mu nu}; left side is 0
        // (constant determinant) so the trace must vanish.
        let f = fam();
        let (t, x) = (0.4, [1.2, 0.3, 0.5]);
        let gi = inverse_metric_frame(t, x, &f).unwrap();
        for dir in FRAME_DIRS {
            let mut trace = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    trace += gi.m[mu][nu] * metric_partial(t, x, &f, dir, (mu, nu)).unwrap();
                }
            }
            assert!(trace.abs() < 1e-12, "trace {trace} along {dir:?}");
        }
    }

    #[test]
    fn inverse_derivative_identity() {
        // ∂ g^{mu nu} = -g^{mu m1} g^{nu n1} ∂ g_{n1 m1}, componentwise
        let f = fam();
        let (t, x) = (0.25, [1.05, -0.4, 0.2]);
        let gi = inverse_metric_frame(t, x, &f).unwrap().m;
        for dir in FRAME_DIRS {
            for mu in 0..4 {
                for nu in 0..4 {
                    let direct = inverse_metric_partial(t, x, &f, dir, (mu, nu)).unwrap();
                    let mut contracted = 0.0;
                    for m1 in 0..4 {
                        for n1 in 0..4 {
                            contracted -= gi[mu][m1]
                                * gi[nu][n1]
                                * metric_partial(t, x, &f, dir, (n1, m1)).unwrap();
                        }
                    }
                    assert!(
                        (direct - contracted).abs() < 1e-10,
                        "({mu},{nu}) along {dir:?}: {direct} vs {contracted}"
                    );
                }
            }
        }
    }

    #[test]
    fn ansatz_structure() {
        let f = fam();
        let (t, x) = (0.2, [0.5, 0.1, 0.0]);
        let h = linearized_ansatz(t, x, &f).unwrap();
        // h_LL = 0, trace-free AB block, h_{2Lbar} = -x2 chi2 / 4
        assert_eq!(h.m[0][0], 0.0);
        assert_eq!(h.m[2][2] + h.m[3][3], 0.0);
        let want = -0.25 * x[1] * f.chi2(x[0] - t, 0).unwrap().value;
        assert!((h.m[1][2] - want).abs() < 1e-16);
        // outside the cone
        assert!(linearized_ansatz(0.2, [0.9, 0.0, 0.0], &f).is_err());
    }

    #[test]
    fn coord_minus_minkowski_terms_match_direct() {
        let f = fam();
        let terms = coord_metric_minus_minkowski_terms();
        let (t, x) = (0.3, [1.4, 0.2, -0.3]);
        let direct = coord_metric(t, x, &f).unwrap();
        let mink = crate::frame::minkowski_coord();
        for mu in 0..4 {
            for nu in 0..4 {
                let got = terms[mu][nu].eval(&f, t, x).unwrap();
                let want = direct.m[mu][nu] - mink[mu][nu];
                assert!((got - want).abs() < 1e-14, "({mu},{nu}): {got} vs {want}");
            }
        }
    }
}
