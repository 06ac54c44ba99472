//! The bent boundary C1 ∪ C2 of the domain D and its causal character:
//! the boundary must be nowhere timelike for the constructed metric,
//! null exactly on the u = 0 locus of C1.
//!
//!   C1: x1 < 1,  (x1-1)² + x2²/4 + x3²/4 = (1-t)²
//!   C2: x1 >= 1, (x1-1)²/4 + x2²/4 + x3²/4 = (1-t)²
//!
//! with null coordinates u = (t-x1)/2, v = (t+x1)/2.

use crate::error::{Error, Result};
use crate::frame::{frame_to_coord, minkowski_coord};
use crate::metric::inverse_metric_frame;
use crate::profiles::ProfileFamily;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryPiece {
    C1,
    C2,
}

/// A point on the bent boundary with its null coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryPoint {
    pub piece: BoundaryPiece,
    pub t: f64,
    pub x: [f64; 3],
    pub u: f64,
    pub v: f64,
}

const SURFACE_TOL: f64 = 1e-10;

impl BoundaryPoint {
    /// Defining-equation residual of the carrying piece.
    pub fn defining_residual(&self) -> f64 {
        let (t, x) = (self.t, self.x);
        let r2 = (1.0 - t) * (1.0 - t);
        match self.piece {
            BoundaryPiece::C1 => {
                (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1] / 4.0 + x[2] * x[2] / 4.0 - r2
            }
            BoundaryPiece::C2 => {
                (x[0] - 1.0) * (x[0] - 1.0) / 4.0 + x[1] * x[1] / 4.0 + x[2] * x[2] / 4.0 - r2
            }
        }
    }

    fn from_coords(piece: BoundaryPiece, t: f64, x: [f64; 3]) -> Result<BoundaryPoint> {
        let p = BoundaryPoint {
            piece,
            t,
            x,
            u: (t - x[0]) / 2.0,
            v: (t + x[0]) / 2.0,
        };
        let resid = p.defining_residual();
        if resid.abs() > SURFACE_TOL {
            return Err(Error::Geometry(format!(
                "point off {piece:?}: defining residual {resid:.3e}"
            )));
        }
        Ok(p)
    }

    /// C1 point from (t, x1, angle): the transverse radius is determined by
    /// the defining equation. Requires t <= x1 < 1 (so the radius² >= 0).
    pub fn on_c1(t: f64, x1: f64, theta: f64) -> Result<BoundaryPoint> {
        if !(x1 < 1.0) {
            return Err(Error::Geometry(format!("C1 needs x1 < 1, got {x1}")));
        }
        let rho2 = 4.0 * ((1.0 - t) * (1.0 - t) - (x1 - 1.0) * (x1 - 1.0));
        if rho2 < -1e-14 {
            return Err(Error::Geometry(format!(
                "no C1 point at t = {t}, x1 = {x1}: radius² = {rho2:.3e}"
            )));
        }
        let rho = rho2.max(0.0).sqrt();
        Self::from_coords(
            BoundaryPiece::C1,
            t,
            [x1, rho * theta.cos(), rho * theta.sin()],
        )
    }

    /// C2 point from (t, polar angle phi with cos >= 0, azimuth theta) on the
    /// sphere of radius 2(1-t) around (1, 0, 0).
    pub fn on_c2(t: f64, phi: f64, theta: f64) -> Result<BoundaryPoint> {
        let r = 2.0 * (1.0 - t);
        let c = phi.cos();
        if c < 0.0 {
            return Err(Error::Geometry("C2 needs x1 >= 1 (cos phi >= 0)".into()));
        }
        Self::from_coords(
            BoundaryPiece::C2,
            t,
            [
                1.0 + r * c,
                r * phi.sin() * theta.cos(),
                r * phi.sin() * theta.sin(),
            ],
        )
    }
}

/// Coordinate components (dt, dx1, dx2, dx3) of a conormal.
///
/// C1: n = 2(1-t) dt - 2(1-x1) dx1 + x2 dx2/2 + x3 dx3/2 (the stated form,
/// equal to the gradient of the defining function); C2 from its gradient.
pub fn conormal(point: &BoundaryPoint) -> Result<[f64; 4]> {
    let resid = point.defining_residual();
    if resid.abs() > SURFACE_TOL {
        return Err(Error::Geometry(format!(
            "off-surface point: residual {resid:.3e}"
        )));
    }
    let (t, x) = (point.t, point.x);
    Ok(match point.piece {
        BoundaryPiece::C1 => [2.0 * (1.0 - t), -2.0 * (1.0 - x[0]), x[1] / 2.0, x[2] / 2.0],
        BoundaryPiece::C2 => [2.0 * (1.0 - t), (x[0] - 1.0) / 2.0, x[1] / 2.0, x[2] / 2.0],
    })
}

/// The C1 conormal in null components (n_u, n_v, n_2, n_3) =
/// (4(1-v), -4u, x2/2, x3/2), for the change-of-basis cross-check.
pub fn conormal_null_form(point: &BoundaryPoint) -> [f64; 4] {
    [
        4.0 * (1.0 - point.v),
        -4.0 * point.u,
        point.x[1] / 2.0,
        point.x[2] / 2.0,
    ]
}

/// Causal character of the boundary at a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CausalCharacter {
    /// Q = g^{αβ} n_α n_β with the assembled inverse metric (authoritative)
    pub q: f64,
    /// Minkowski comparison m^{αβ} n_α n_β
    pub q_mink: f64,
    /// the hand-expanded printed formula for C1, kept as a cross-check only
    pub q_paper_expansion: Option<f64>,
}

/// Q and its Minkowski comparison at a boundary point. The generic
/// contraction with the assembled inverse metric is authoritative; the
/// printed C1 expansion is evaluated alongside and any mismatch is the
/// caller's to report, not to patch.
pub fn causal_character(point: &BoundaryPoint, family: &ProfileFamily) -> Result<CausalCharacter> {
    let n = conormal(point)?;
    let gi = frame_to_coord(&inverse_metric_frame(point.t, point.x, family)?).m;
    let mink = minkowski_coord(); // equals its own inverse
    let mut q = 0.0;
    let mut q_mink = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            q += gi[a][b] * n[a] * n[b];
            q_mink += mink[a][b] * n[a] * n[b];
        }
    }
    let q_paper = match point.piece {
        BoundaryPiece::C1 => Some(paper_expansion_c1(point, family)?),
        BoundaryPiece::C2 => None,
    };
    Ok(CausalCharacter {
        q,
        q_mink,
        q_paper_expansion: q_paper,
    })
}

/// The printed section-4 expansion of g^{αβ} n_α n_β on C1.
fn paper_expansion_c1(point: &BoundaryPoint, family: &ProfileFamily) -> Result<f64> {
    let (u, v) = (point.u, point.v);
    let (x2, x3) = (point.x[1], point.x[2]);
    let s = point.x[0] - point.t;
    let c1 = family.chi1(s, 0)?.value;
    let ct = family.chitilde2(s, 0)?.value;
    let a = 1.0 + c1;
    Ok(
        16.0 * (1.0 - v) * u + 0.25 * (x2 * x2 + x3 * x3) + 0.25 * (x3 * x3 - x2 * x2 / a) * c1
            - (x2 * x2 + x3 * x3) * (1.0 - v) * ct
            + (0.25 * (u + v) + (x2 * x2 * a + x3 * x3 / a) * ct / 64.0) * ct * 16.0 * u * u,
    )
}

/// One scanned boundary point in a report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanPoint {
    pub piece: BoundaryPiece,
    pub u: f64,
    pub theta: f64,
    pub q: f64,
    pub q_mink: f64,
}

/// Boundary-scan verdict.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryScanReport {
    pub points: usize,
    pub max_q: f64,
    pub worst: ScanPoint,
    /// points with |Q| <= null_window; all must satisfy |u| <= u_window
    pub near_null: Vec<ScanPoint>,
    pub max_near_null_abs_u: f64,
    pub max_defining_residual: f64,
    /// worst |Q_generic - Q_printed_expansion| over C1 (reported mismatch)
    pub max_paper_expansion_gap: f64,
    pub null_window: f64,
    pub u_window: f64,
}

pub const NULL_WINDOW: f64 = 1e-8;
pub const U_WINDOW: f64 = 1e-4;

/// Scan C1 ∪ C2 on a (time × surface-parameter × angle) grid.
///
/// C1 is swept in (t, x1 ∈ [t, 1)) including the u = 0 ring; C2 in
/// (t, cos φ ∈ [0, 1]). Roughly `n_t · n_s · n_ang` points per piece.
pub fn boundary_scan(
    family: &ProfileFamily,
    n_t: usize,
    n_s: usize,
    n_ang: usize,
) -> Result<BoundaryScanReport> {
    let mut report = BoundaryScanReport {
        points: 0,
        max_q: f64::NEG_INFINITY,
        worst: ScanPoint {
            piece: BoundaryPiece::C1,
            u: 0.0,
            theta: 0.0,
            q: 0.0,
            q_mink: 0.0,
        },
        near_null: Vec::new(),
        max_near_null_abs_u: 0.0,
        max_defining_residual: 0.0,
        max_paper_expansion_gap: 0.0,
        null_window: NULL_WINDOW,
        u_window: U_WINDOW,
    };
    let mut visit = |p: BoundaryPoint, theta: f64, fam: &ProfileFamily| -> Result<()> {
        let ch = causal_character(&p, fam)?;
        let sp = ScanPoint {
            piece: p.piece,
            u: p.u,
            theta,
            q: ch.q,
            q_mink: ch.q_mink,
        };
        report.points += 1;
        report.max_defining_residual = report
            .max_defining_residual
            .max(p.defining_residual().abs());
        if let Some(qp) = ch.q_paper_expansion {
            report.max_paper_expansion_gap = report.max_paper_expansion_gap.max((ch.q - qp).abs());
        }
        if ch.q > report.max_q {
            report.max_q = ch.q;
            report.worst = sp;
        }
        if ch.q.abs() <= NULL_WINDOW {
            report.max_near_null_abs_u = report.max_near_null_abs_u.max(p.u.abs());
            if report.near_null.len() < 64 {
                report.near_null.push(sp);
            }
        }
        Ok(())
    };
    for it in 0..n_t {
        let t = 0.95 * (it as f64) / (n_t.max(2) as f64 - 1.0);
        for is in 0..n_s {
            // C1: x1 from t (u = 0) up to just below 1
            let x1 = t + (1.0 - 1e-9 - t) * (is as f64) / (n_s as f64 - 1.0);
            for ia in 0..n_ang {
                let theta = 2.0 * std::f64::consts::PI * (ia as f64) / (n_ang as f64);
                visit(BoundaryPoint::on_c1(t, x1, theta)?, theta, family)?;
            }
            // C2: cos phi from 0 to 1 (vertex)
            let phi = (1.0 - (is as f64) / (n_s as f64 - 1.0)).acos();
            for ia in 0..n_ang {
                let theta = 2.0 * std::f64::consts::PI * (ia as f64) / (n_ang as f64);
                visit(BoundaryPoint::on_c2(t, phi, theta)?, theta, family)?;
            }
        }
    }
    Ok(report)
}

/// CSV rows (piece, u, angle, Q, Q_mink) for a scan.
pub fn write_scan_csv<W: std::io::Write>(
    family: &ProfileFamily,
    n_t: usize,
    n_s: usize,
    n_ang: usize,
    w: &mut W,
) -> Result<()> {
    writeln!(w, "piece,u,theta,Q,Q_mink")?;
    for it in 0..n_t {
        let t = 0.95 * (it as f64) / (n_t.max(2) as f64 - 1.0);
        for is in 0..n_s {
            let x1 = t + (1.0 - 1e-9 - t) * (is as f64) / (n_s as f64 - 1.0);
            let phi = (1.0 - (is as f64) / (n_s as f64 - 1.0)).acos();
            for ia in 0..n_ang {
                let theta = 2.0 * std::f64::consts::PI * (ia as f64) / (n_ang as f64);
                for p in [
                    BoundaryPoint::on_c1(t, x1, theta)?,
                    BoundaryPoint::on_c2(t, phi, theta)?,
                ] {
                    let ch = causal_character(&p, family)?;
                    writeln!(
                        w,
                        "{:?},{:.8e},{theta:.6},{:.10e},{:.10e}",
                        p.piece, p.u, ch.q, ch.q_mink
                    )?;
                }
            }
        }
    }
    Ok(())
}
