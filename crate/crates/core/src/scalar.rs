//! Scalar abstraction shared by the state algebra, the probe grid and the
//! Sagnac mapping.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumCast};

/// Real floating-point scalar: `f32`, `f64` or the double-double
/// [`twofloat::TwoFloat`] used by the high-precision Jones path.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal, exactly whenever the target can hold it.
    #[inline]
    fn lit(x: f64) -> Self {
        // NumCast rather than FromPrimitive: TwoFloat's FromPrimitive routes
        // f64 through the integer conversions and truncates.
        <Self as NumCast>::from(x).expect("f64 literal representable in scalar type")
    }

    /// Rounds to the nearest `f64`.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
impl Real for twofloat::TwoFloat {}
