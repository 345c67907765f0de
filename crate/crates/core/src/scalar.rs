//! Floating-point abstraction shared by every model component.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;

/// Real scalar used for probabilities, activity levels and costs.
///
/// Implemented for `f32` and `f64`. The bound set is what the kernels
/// need: transcendental functions (`exp`, `ln_1p`, `exp_m1`, `powi`),
/// lossless-enough conversion from counts, and uniform sampling on `[0, 1)`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Draws a uniform value on `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Converts a count or index. Exact for every count this crate produces.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as float")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// True when the value lies in the closed unit interval (NaN is rejected).
    #[inline]
    fn in_unit_interval(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }
}

impl Scalar for f32 {
    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f32>()
    }
}

impl Scalar for f64 {
    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>()
    }
}
