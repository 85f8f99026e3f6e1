//! Floating-point scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// f32 or f64.
///
/// The associated constants are precision-dependent tolerance floors. For
/// `f64` they are the values the crate documents; for `f32` they are relaxed
/// to what single precision can actually resolve.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Euclidean distance under which two nodes count as the same point.
    const DUPLICATE_TOL: f64;
    /// Tolerance for mass and unit-norm checks.
    const MASS_TOL: f64;
    /// Default relative tolerance for eigenvalue sign decisions.
    const DEFAULT_TOL: f64;

    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in a float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }
}

impl Scalar for f64 {
    const DUPLICATE_TOL: f64 = 1e-12;
    const MASS_TOL: f64 = 1e-12;
    const DEFAULT_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const DUPLICATE_TOL: f64 = 1e-6;
    const MASS_TOL: f64 = 1e-5;
    const DEFAULT_TOL: f64 = 1e-4;
}

/// `T::lit(x)` without the turbofish noise at call sites.
#[inline]
pub(crate) fn c<T: Scalar>(x: f64) -> T {
    T::lit(x)
}
