//! Scalar-generic numeric kernels: special functions, quadrature, ODE
//! stepping, power-law fits and a small deterministic RNG.
//!
//! Kernels are generic over [`Real`] so they work for `f32`/`f64`; the
//! domain layer instantiates everything at `f64` (see the crate-root
//! aliases) because the verification tolerances are `f64` contracts.

use num_traits::{Float, FromPrimitive};

pub mod fd;
pub mod fit;
pub mod gamma;
pub mod ode;
pub mod quad;
pub mod rng;

/// Floating-point scalar the kernels are generic over.
pub trait Real: Float + FromPrimitive + core::fmt::Debug + 'static {
    /// Lift an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
