//! Floating-point scalar abstraction for the analytic layer.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

/// Scalar type for the analytic routines: `f32` or `f64`.
///
/// Integer-side arithmetic (prime tables, multiplicative functions) is
/// fixed-width and the exact layer uses rationals; everything evaluated by
/// quadrature or series is generic over this trait.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` literals baked into the library.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion")
    }
    /// Conversion from integer counters.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("scalar conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
