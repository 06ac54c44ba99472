//! The semilinear model system □φ₂ = -(Lbar φ₁)², □φ₁ = 0 with the explicit
//! solution φ₁ = chi1(x1 - t), φ₂ = -t chi2(x1 - t) on the cone
//! Λ = { |x - (1,0,0)| <= 1 - t, t >= 0 }, and its H² blow-up.

use crate::error::{Error, Result};
use crate::profiles::ProfileFamily;
use crate::sobolev::{
    classify, default_delta_ladder, reduced_integral, slice, DivergenceVerdict, SliceKind,
};
use crate::terms::{Dir, Term, TermSum, CHI_1, CHI_2};
use serde::Serialize;

/// Cutoff around the singular line x1 = t for pointwise order-2 evaluation.
pub const SINGULAR_CUTOFF: f64 = 1e-6;

/// Which field of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    Phi1,
    Phi2,
}

/// The explicit solution bound to a profile family.
#[derive(Debug, Clone)]
pub struct ModelSolution<'a> {
    family: &'a ProfileFamily,
    phi1: TermSum,
    phi2: TermSum,
}

fn order(midx: [u8; 4]) -> u8 {
    midx.iter().sum()
}

impl<'a> ModelSolution<'a> {
    pub fn new(family: &'a ProfileFamily) -> Self {
        ModelSolution {
            family,
            phi1: TermSum::new(vec![Term::new(1.0, 0, 0, 0, CHI_1)]),
            phi2: TermSum::new(vec![Term::new(-1.0, 1, 0, 0, CHI_2)]),
        }
    }

    fn in_cone(t: f64, x: [f64; 3]) -> bool {
        if t < 0.0 || t > 1.0 {
            return false;
        }
        let dx = [x[0] - 1.0, x[1], x[2]];
        (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt() <= 1.0 - t
    }

    fn term_sum(&self, which: Field) -> &TermSum {
        match which {
            Field::Phi1 => &self.phi1,
            Field::Phi2 => &self.phi2,
        }
    }

    /// φ or a coordinate derivative of it, multi-index (t, x1, x2, x3) of
    /// total order <= 2. Points must lie in Λ; order-2 requests must stay
    /// off the singular line by [`SINGULAR_CUTOFF`].
    pub fn eval(&self, t: f64, x: [f64; 3], which: Field, midx: [u8; 4]) -> Result<f64> {
        if !Self::in_cone(t, x) {
            return Err(Error::Domain(format!(
                "({t}, {x:?}) outside the cone Lambda"
            )));
        }
        let ord = order(midx);
        if ord > 2 {
            return Err(Error::Domain(format!("derivative order {ord} > 2")));
        }
        if ord == 2 && (x[0] - t).abs() < SINGULAR_CUTOFF {
            return Err(Error::Singular(format!(
                "order-2 evaluation within {SINGULAR_CUTOFF} of the line x1 = t"
            )));
        }
        let mut sum = self.term_sum(which).clone();
        let dirs = [Dir::T, Dir::X1, Dir::X2, Dir::X3];
        for (slot, &count) in midx.iter().enumerate() {
            for _ in 0..count {
                sum = sum.deriv(dirs[slot]);
            }
        }
        sum.eval(self.family, t, x)
    }

    /// (□φ₁, □φ₂ + (Lbar φ₁)²): both vanish for the explicit solution.
    pub fn residual(&self, t: f64, x: [f64; 3]) -> Result<(f64, f64)> {
        let box_of = |which: Field| -> Result<f64> {
            Ok(-self.eval(t, x, which, [2, 0, 0, 0])?
                + self.eval(t, x, which, [0, 2, 0, 0])?
                + self.eval(t, x, which, [0, 0, 2, 0])?
                + self.eval(t, x, which, [0, 0, 0, 2])?)
        };
        let r1 = box_of(Field::Phi1)?;
        let lbar_phi1 = self.eval(t, x, Field::Phi1, [1, 0, 0, 0])?
            - self.eval(t, x, Field::Phi1, [0, 1, 0, 0])?;
        let r2 = box_of(Field::Phi2)? + lbar_phi1 * lbar_phi1;
        Ok((r1, r2))
    }

    /// □φ₂ by 5-point central stencils (independent difference oracle).
    pub fn box_phi2_stencil(&self, t: f64, x: [f64; 3], h: f64) -> Result<f64> {
        let phi = |t: f64, x: [f64; 3]| self.eval(t, x, Field::Phi2, [0, 0, 0, 0]);
        let mut lap = 0.0;
        for axis in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[axis] += h;
            xm[axis] -= h;
            lap += (phi(t, xp)? - 2.0 * phi(t, x)? + phi(t, xm)?) / (h * h);
        }
        let dtt = (phi(t + h, x)? - 2.0 * phi(t, x)? + phi(t - h, x)?) / (h * h);
        Ok(-dtt + lap)
    }

    /// Truncated-norm ladders of the leading H² pieces on the ball slice:
    /// I_φ1(δ) = ∫ chi1''(x1-t)² w0,  I_φ2(δ) = t² ∫ chi2''(x1-t)² w0,
    /// classified per cutoff ladder.
    pub fn norm_profile(
        &self,
        t: f64,
        deltas: &[f64],
        quad_tol: f64,
    ) -> Result<(DivergenceVerdict, DivergenceVerdict)> {
        let sl = slice(SliceKind::Ball, t);
        let alpha = self.family.params().alpha;
        let f1 = |s: f64| {
            let e = self.family.chi1(s, 2)?;
            Ok(e.value * e.value)
        };
        let f2 = |s: f64| {
            let e = self.family.chi2(s, 2)?;
            Ok(t * t * e.value * e.value)
        };
        let mut lad1 = Vec::with_capacity(deltas.len());
        let mut lad2 = Vec::with_capacity(deltas.len());
        for &d in deltas {
            lad1.push((d, reduced_integral(&f1, &sl, 0, d, quad_tol)?.value));
            lad2.push((d, reduced_integral(&f2, &sl, 0, d, quad_tol)?.value));
        }
        Ok((classify(&lad1, alpha)?, classify(&lad2, alpha)?))
    }

    /// CSV of the two ladders: t, delta, I_phi1, I_phi2.
    pub fn write_ladder_csv<W: std::io::Write>(
        &self,
        t: f64,
        quad_tol: f64,
        w: &mut W,
    ) -> Result<()> {
        let sl = slice(SliceKind::Ball, t);
        writeln!(w, "t,delta,I_phi1,I_phi2")?;
        for d in default_delta_ladder() {
            let f1 = |s: f64| {
                let e = self.family.chi1(s, 2)?;
                Ok(e.value * e.value)
            };
            let f2 = |s: f64| {
                let e = self.family.chi2(s, 2)?;
                Ok(t * t * e.value * e.value)
            };
            let i1 = reduced_integral(&f1, &sl, 0, d, quad_tol)?.value;
            let i2 = reduced_integral(&f2, &sl, 0, d, quad_tol)?.value;
            writeln!(w, "{t:.4},{d:.6e},{i1:.12e},{i2:.12e}")?;
        }
        Ok(())
    }
}
