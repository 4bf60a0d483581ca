//! Scalar abstraction shared by the controller, plant and metrics.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only for types that cannot represent finite `f64`s.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar type cannot represent f64 literal")
    }

    /// Lossy conversion used for error reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {}

/// Sign selection with `sign(0) = 0`.
pub fn sign<T: Real>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Signed power `|x|^p * sign(x)`, zero at the origin for every exponent.
pub fn signed_pow<T: Real>(x: T, p: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x.abs().powf(p) * sign(x)
    }
}
