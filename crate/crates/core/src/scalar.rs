//! Scalar abstraction shared by every kernel in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar: implemented for `f32` and `f64`.
///
/// Every algorithm is written against this trait. Tolerances that the
/// caller does not supply are derived from [`Scalar::default_rank_tol`]
/// so that `f32` instantiations stay meaningful.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Relative singular-value threshold used to decide numerical rank.
    fn default_rank_tol() -> Self;

    /// Lossy conversion from `f64`; used for literals and RNG draws.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {
    fn default_rank_tol() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn default_rank_tol() -> Self {
        1e-8
    }
}
