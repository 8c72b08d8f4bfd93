//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point degree type: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `true` for values inside the closed unit interval.
    #[inline]
    fn is_degree(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }

    /// Largest representable value strictly below `self` (for finite positive inputs).
    #[inline]
    fn step_down(self) -> Self {
        if self <= Self::zero() {
            return Self::zero();
        }
        let delta = (self * Self::epsilon()).max(Self::min_positive_value());
        let next = self - delta;
        if next < self {
            next
        } else {
            self - Self::epsilon() * self.abs().max(Self::one())
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Evenly spaced grid `{0, step, 2 step, …, 1}` on the unit interval.
///
/// Points are produced as `k / m` so that every value is correctly rounded.
pub fn unit_grid<S: Scalar>(step: S) -> Vec<S> {
    let m = (S::one() / step).round().to_usize().unwrap_or(1).max(1);
    let denom = S::from_usize(m).unwrap();
    (0..=m).map(|k| S::from_usize(k).unwrap() / denom).collect()
}
