// Shared across test binaries; not every binary uses every helper.
#![allow(dead_code)]

//! Shared test oracles: forward-mode dual numbers for derivative
//! cross-checks and a rejection sampler for Monte Carlo volume integrals.

use std::ops::{Add, Div, Mul, Neg, Sub};
use wavegauge::num::rng::SplitMix64;
use wavegauge::profiles::ProfileFamily;

/// Minimal forward-mode dual number: value + one directional derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    pub fn new(re: f64, du: f64) -> Dual {
        Dual { re, du }
    }

    pub fn constant(re: f64) -> Dual {
        Dual { re, du: 0.0 }
    }

    pub fn recip(self) -> Dual {
        Dual {
            re: 1.0 / self.re,
            du: -self.du / (self.re * self.re),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            re: self.re + o.re,
            du: self.du + o.du,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            re: self.re - o.re,
            du: self.du - o.du,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            du: self.du * o.re + self.re * o.du,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        self * o.recip()
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            du: -self.du,
        }
    }
}

/// Dual-lifted point (t, x1, x2, x3) seeded with a direction.
pub struct DualPoint {
    pub t: Dual,
    pub x1: Dual,
    pub x2: Dual,
    pub x3: Dual,
}

impl DualPoint {
    /// Seed the direction: L = ∂t + ∂x1, Lbar = ∂t - ∂x1, or a coordinate.
    pub fn seeded(t: f64, x: [f64; 3], dir: wavegauge::terms::Dir) -> DualPoint {
        use wavegauge::terms::Dir;
        let (dt, dx1, dx2, dx3) = match dir {
            Dir::T => (1.0, 0.0, 0.0, 0.0),
            Dir::X1 => (0.0, 1.0, 0.0, 0.0),
            Dir::X2 => (0.0, 0.0, 1.0, 0.0),
            Dir::X3 => (0.0, 0.0, 0.0, 1.0),
            Dir::L => (1.0, 1.0, 0.0, 0.0),
            Dir::Lbar => (1.0, -1.0, 0.0, 0.0),
        };
        DualPoint {
            t: Dual::new(t, dt),
            x1: Dual::new(x[0], dx1),
            x2: Dual::new(x[1], dx2),
            x3: Dual::new(x[2], dx3),
        }
    }

    pub fn s(&self) -> Dual {
        self.x1 - self.t
    }
}

/// Dual lift of a profile function: value and chain-ruled first derivative
/// from the family's own evaluators.
pub fn lift_profile(family: &ProfileFamily, which: &str, s: Dual) -> Dual {
    let (v, d) = match which {
        "chi1" => (
            family.chi1(s.re, 0).unwrap().value,
            family.chi1(s.re, 1).unwrap().value,
        ),
        "chi2" => (
            family.chi2(s.re, 0).unwrap().value,
            family.chi2(s.re, 1).unwrap().value,
        ),
        "chitilde2" => (
            family.chitilde2(s.re, 0).unwrap().value,
            family.chitilde2(s.re, 1).unwrap().value,
        ),
        _ => unreachable!(),
    };
    Dual {
        re: v,
        du: d * s.du,
    }
}

/// Dual-mode Table 1: the metric entries rebuilt with dual arithmetic,
/// independent of the structured-term differentiation.
pub fn dual_metric_entry(family: &ProfileFamily, p: &DualPoint, i: usize, j: usize) -> Dual {
    let s = p.s();
    let c1 = lift_profile(family, "chi1", s);
    let ct = lift_profile(family, "chitilde2", s);
    let one = Dual::constant(1.0);
    let a = one + c1;
    let quarter = Dual::constant(0.25);
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 1) => Dual::constant(-2.0),
        (1, 1) => -(p.t * ct),
        (1, 2) => -(quarter * p.x2 * a * ct),
        (1, 3) => -(quarter * p.x3 * ct / a),
        (2, 2) => a,
        (3, 3) => one / a,
        _ => Dual::constant(0.0),
    }
}

/// Monte Carlo integral of f(x1 - t) over a slice by rejection sampling
/// from the bounding box. Returns (estimate, standard_error).
pub fn monte_carlo_slice(
    slice: &wavegauge::sobolev::DomainSlice,
    f: impl Fn(f64) -> f64,
    weight_x2_sq: bool,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = SplitMix64::new(seed);
    let t = slice.t;
    let half_width = 2.0 * (1.0 - t);
    let box_vol = (slice.x1_hi - slice.x1_lo) * (2.0 * half_width) * (2.0 * half_width);
    let inside = |x: [f64; 3]| -> bool {
        let r2 = (1.0 - t) * (1.0 - t);
        match slice.kind {
            wavegauge::sobolev::SliceKind::Ball => {
                (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1] + x[2] * x[2] < r2
            }
            wavegauge::sobolev::SliceKind::Bent => {
                let q = if x[0] < 1.0 {
                    (x[0] - 1.0) * (x[0] - 1.0)
                } else {
                    (x[0] - 1.0) * (x[0] - 1.0) / 4.0
                };
                q + x[1] * x[1] / 4.0 + x[2] * x[2] / 4.0 < r2
            }
            wavegauge::sobolev::SliceKind::Empty => false,
        }
    };
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let x = [
            rng.in_range(slice.x1_lo, slice.x1_hi),
            rng.in_range(-half_width, half_width),
            rng.in_range(-half_width, half_width),
        ];
        let v = if inside(x) {
            f(x[0] - t) * if weight_x2_sq { x[1] * x[1] } else { 1.0 }
        } else {
            0.0
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (box_vol * mean, box_vol * (var / n).sqrt())
}
