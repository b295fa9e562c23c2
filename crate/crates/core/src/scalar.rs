//! Scalar abstraction shared by every kernel in the crate.
//!
//! All transforms, norms and checkers are written once against [`Scalar`]
//! and instantiated for `f32` and `f64`. Exact rational evaluation of the
//! measure polynomial lives in [`crate::threshold::measure_exact`], which
//! only needs ring operations and so is generic over `num_traits::Num`.

use std::fmt::{Debug, Display};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Product + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count.
    #[inline]
    fn of_usize(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Machine epsilon scaled for "agrees to roundoff" comparisons.
    fn roundoff() -> Self;

    /// Relative slack granted to inequality checks.
    fn check_tol() -> Self;
}

impl Scalar for f32 {
    fn roundoff() -> Self {
        1e-5
    }

    fn check_tol() -> Self {
        1e-4
    }
}

impl Scalar for f64 {
    fn roundoff() -> Self {
        1e-12
    }

    fn check_tol() -> Self {
        1e-10
    }
}

/// `σ = √(p(1−p))`.
#[inline]
pub fn sigma_of<T: Scalar>(p: T) -> T {
    (p * (T::one() - p)).sqrt()
}

/// Relative comparison used by every `holds` predicate: `lhs ≤ rhs` up to
/// `tol · max(|lhs|, |rhs|, tiny)`.
#[inline]
pub fn le_rel<T: Scalar>(lhs: T, rhs: T, tol: T) -> bool {
    let scale = lhs.abs().max(rhs.abs()).max(T::min_positive_value());
    lhs <= rhs + tol * scale
}
