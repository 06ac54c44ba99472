//! Structured term representation for every field this engine differentiates.
//!
//! Each metric entry, ansatz entry and model field is a finite sum of terms
//!     coef · t^pt · x2^p2 · x3^p3 · F^(forder)(x1 - t)
//! where F is a named product of profile atoms. Derivatives in any coordinate
//! or frame direction are exact rewrites of the term list (∂_L s = 0,
//! ∂_Lbar s = -2 are hard-coded), so all derivatives are exact modulo profile
//! accuracy — no automatic differentiation, no stencils.

use crate::error::{Error, Result};
use crate::profiles::ProfileFamily;

/// Differentiation directions: coordinates and the constant-coefficient
/// frame fields L = ∂t + ∂x1, Lbar = ∂t - ∂x1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    T,
    X1,
    X2,
    X3,
    L,
    Lbar,
}

/// Named profile factor (1 + chi1)^a · chitilde2^q · chi2^r · chi1^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub a_pow: i8,
    pub t_pow: u8,
    pub c2_pow: u8,
    pub c1_pow: u8,
}

pub const ONE: Factor = Factor {
    a_pow: 0,
    t_pow: 0,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A: Factor = Factor {
    a_pow: 1,
    t_pow: 0,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A_INV: Factor = Factor {
    a_pow: -1,
    t_pow: 0,
    c2_pow: 0,
    c1_pow: 0,
};
pub const CHI_T: Factor = Factor {
    a_pow: 0,
    t_pow: 1,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A_CHI_T: Factor = Factor {
    a_pow: 1,
    t_pow: 1,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A_INV_CHI_T: Factor = Factor {
    a_pow: -1,
    t_pow: 1,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A_CHI_T2: Factor = Factor {
    a_pow: 1,
    t_pow: 2,
    c2_pow: 0,
    c1_pow: 0,
};
pub const A_INV_CHI_T2: Factor = Factor {
    a_pow: -1,
    t_pow: 2,
    c2_pow: 0,
    c1_pow: 0,
};
pub const CHI_1: Factor = Factor {
    a_pow: 0,
    t_pow: 0,
    c2_pow: 0,
    c1_pow: 1,
};
pub const CHI_2: Factor = Factor {
    a_pow: 0,
    t_pow: 0,
    c2_pow: 1,
    c1_pow: 0,
};

/// (v, v', v'') triple of a scalar function of s.
type Jet = [f64; 3];

fn jet_pow(base: Jet, p: i32) -> Jet {
    // p = 0 and 1 handled directly: the generic rule forms 0 * v^{p-2} which
    // is 0 * inf = NaN when the base vanishes (chitilde2 = 0 at s = 0, all
    // profiles at epsilon = 0).
    if p == 0 {
        return [1.0, 0.0, 0.0];
    }
    if p == 1 {
        return base;
    }
    let [v, vp, vpp] = base;
    let pf = p as f64;
    let v_pm1 = v.powi(p - 1);
    let v_pm2 = v.powi(p - 2);
    [
        v.powi(p),
        pf * v_pm1 * vp,
        pf * (pf - 1.0) * v_pm2 * vp * vp + pf * v_pm1 * vpp,
    ]
}

fn jet_mul(x: Jet, y: Jet) -> Jet {
    [
        x[0] * y[0],
        x[1] * y[0] + x[0] * y[1],
        x[2] * y[0] + 2.0 * x[1] * y[1] + x[0] * y[2],
    ]
}

impl Factor {
    pub fn is_one(&self) -> bool {
        *self == ONE
    }

    /// Evaluate d^order/ds^order of the factor. Orders above 0 touch profile
    /// derivatives, so the singular flag at s = 0 propagates as an error.
    pub fn eval(&self, family: &ProfileFamily, s: f64, order: u8) -> Result<f64> {
        if self.is_one() {
            return Ok(if order == 0 { 1.0 } else { 0.0 });
        }
        let need = order.min(2);
        let jet_of = |get: &dyn Fn(u8) -> Result<f64>| -> Result<Jet> {
            let mut j = [0.0; 3];
            for (k, slot) in j.iter_mut().enumerate().take(need as usize + 1) {
                *slot = get(k as u8)?;
            }
            Ok(j)
        };
        let mut acc: Jet = [1.0, 0.0, 0.0];
        if self.a_pow != 0 {
            let base = jet_of(&|k| {
                let e = family.chi1(s, k)?;
                if e.singular {
                    return Err(Error::Singular(format!("chi1'' at s = {s}")));
                }
                Ok(if k == 0 { 1.0 + e.value } else { e.value })
            })?;
            acc = jet_mul(acc, jet_pow(base, self.a_pow as i32));
        }
        if self.t_pow != 0 {
            let base = jet_of(&|k| {
                let e = family.chitilde2(s, k)?;
                if e.singular {
                    return Err(Error::Singular(format!("chitilde2'' at s = {s}")));
                }
                Ok(e.value)
            })?;
            acc = jet_mul(acc, jet_pow(base, self.t_pow as i32));
        }
        if self.c2_pow != 0 {
            let base = jet_of(&|k| {
                let e = family.chi2(s, k)?;
                if e.singular {
                    return Err(Error::Singular(format!("chi2'' at s = {s}")));
                }
                Ok(e.value)
            })?;
            acc = jet_mul(acc, jet_pow(base, self.c2_pow as i32));
        }
        if self.c1_pow != 0 {
            let base = jet_of(&|k| {
                let e = family.chi1(s, k)?;
                if e.singular {
                    return Err(Error::Singular(format!("chi1'' at s = {s}")));
                }
                Ok(e.value)
            })?;
            acc = jet_mul(acc, jet_pow(base, self.c1_pow as i32));
        }
        Ok(acc[order.min(2) as usize])
    }
}

/// coef · t^pt · x2^p2 · x3^p3 · F^(forder)(s)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub pt: u8,
    pub p2: u8,
    pub p3: u8,
    pub factor: Factor,
    pub forder: u8,
}

impl Term {
    pub const fn new(coef: f64, pt: u8, p2: u8, p3: u8, factor: Factor) -> Term {
        Term {
            coef,
            pt,
            p2,
            p3,
            factor,
            forder: 0,
        }
    }

    fn eval(&self, family: &ProfileFamily, t: f64, x: [f64; 3]) -> Result<f64> {
        if self.forder > 2 {
            return Err(Error::Domain(format!(
                "profile derivative order {} > 2 in term evaluation",
                self.forder
            )));
        }
        let s = x[0] - t;
        let mono = self.coef
            * t.powi(self.pt as i32)
            * x[1].powi(self.p2 as i32)
            * x[2].powi(self.p3 as i32);
        if mono == 0.0 {
            // still surface singular second derivatives at s = 0
            if self.forder == 2 {
                self.factor.eval(family, s, 2)?;
            }
            return Ok(0.0);
        }
        Ok(mono * self.factor.eval(family, s, self.forder)?)
    }
}

/// A finite sum of [`Term`]s: the engine's exact scalar field type.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermSum(pub Vec<Term>);

impl TermSum {
    pub fn new(terms: Vec<Term>) -> TermSum {
        TermSum(terms)
    }

    pub fn zero() -> TermSum {
        TermSum(Vec::new())
    }

    pub fn constant(c: f64) -> TermSum {
        TermSum(vec![Term::new(c, 0, 0, 0, ONE)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|t| t.coef == 0.0)
    }

    pub fn eval(&self, family: &ProfileFamily, t: f64, x: [f64; 3]) -> Result<f64> {
        let mut acc = 0.0;
        for term in &self.0 {
            acc += term.eval(family, t, x)?;
        }
        Ok(acc)
    }

    pub fn scaled(&self, c: f64) -> TermSum {
        TermSum(
            self.0
                .iter()
                .map(|t| Term {
                    coef: t.coef * c,
                    ..*t
                })
                .collect(),
        )
    }

    pub fn plus(&self, other: &TermSum) -> TermSum {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        TermSum(v)
    }

    /// Exact derivative: rewrites the term list using ∂ s/∂t = -1,
    /// ∂s/∂x1 = 1, ∂_L s = 0, ∂_Lbar s = -2.
    pub fn deriv(&self, dir: Dir) -> TermSum {
        let mut out = Vec::new();
        for term in &self.0 {
            let poly_part = |out: &mut Vec<Term>, pow: u8, drop: fn(&Term) -> Term| {
                if pow > 0 {
                    let mut t = drop(term);
                    t.coef *= pow as f64;
                    if t.coef != 0.0 {
                        out.push(t);
                    }
                }
            };
            let s_part = |out: &mut Vec<Term>, scale: f64| {
                if !term.factor.is_one() && scale != 0.0 {
                    out.push(Term {
                        coef: term.coef * scale,
                        forder: term.forder + 1,
                        ..*term
                    });
                }
            };
            match dir {
                Dir::T => {
                    poly_part(&mut out, term.pt, |t| Term { pt: t.pt - 1, ..*t });
                    s_part(&mut out, -1.0);
                }
                Dir::X1 => s_part(&mut out, 1.0),
                Dir::X2 => poly_part(&mut out, term.p2, |t| Term { p2: t.p2 - 1, ..*t }),
                Dir::X3 => poly_part(&mut out, term.p3, |t| Term { p3: t.p3 - 1, ..*t }),
                Dir::L => poly_part(&mut out, term.pt, |t| Term { pt: t.pt - 1, ..*t }),
                Dir::Lbar => {
                    poly_part(&mut out, term.pt, |t| Term { pt: t.pt - 1, ..*t });
                    s_part(&mut out, -2.0);
                }
            }
        }
        TermSum(out)
    }

    /// Maximum polynomial degree in x2 and x3 across terms, used by the
    /// 1-D norm reduction to pick the cross-section moment.
    pub fn xa_degrees(&self) -> (u8, u8) {
        let mut d2 = 0;
        let mut d3 = 0;
        for t in &self.0 {
            if t.coef != 0.0 {
                d2 = d2.max(t.p2);
                d3 = d3.max(t.p3);
            }
        }
        (d2, d3)
    }
}
