//! Numeric abstraction for travel times, weights and costs.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the solver is generic over (`f32` or `f64`).
///
/// Forbidden arcs are encoded as `+infinity`, so the type must be an IEEE
/// float.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used for constants and generated data.
    fn of(value: f64) -> Self {
        <Self as FromPrimitive>::from_f64(value).expect("finite f64 converts to every float")
    }

    fn of_usize(value: usize) -> Self {
        <Self as FromPrimitive>::from_usize(value).expect("usize converts to every float")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Product that keeps a forbidden (infinite) latency infinite even when
    /// the weight is zero, instead of producing NaN.
    fn weighted(weight: Self, value: Self) -> Self {
        if value.is_infinite() {
            Self::infinity()
        } else {
            weight * value
        }
    }

    /// Threshold below which a cost decrease is treated as rounding noise:
    /// `eps^(2/3)` relative to `reference`.
    fn improvement_tolerance(reference: Self) -> Self {
        Self::epsilon().powf(Self::of(2.0 / 3.0)) * (Self::one() + reference.abs())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Absolute-or-relative comparison used by tests and oracles.
pub fn approx_eq<T: Scalar>(a: T, b: T, rel: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    let (a, b) = (a.as_f64(), b.as_f64());
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
