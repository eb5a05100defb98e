//! Numeric back-ends.
//!
//! Every algorithm is generic over [`Scalar`]. `f64` is the working type;
//! [`Rational`] gives exact arithmetic so that identities can be asserted
//! with equality instead of a tolerance.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Relative tolerance used when comparing floating-point criteria for ties.
pub const FLOAT_TIE_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance used by the inequality checkers in float mode.
pub const FLOAT_CHECK_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Converts a float. Exact for [`Rational`] (binary expansion is kept).
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self < other` by more than the tie tolerance of this back-end.
    fn definitely_less(&self, other: &Self) -> bool;

    /// Default slack for inequality checks: zero when exact.
    fn check_tolerance() -> Self;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn definitely_less(&self, other: &Self) -> bool {
        let scale = f64::abs(*self).max(f64::abs(*other));
        *self < *other && (*other - *self) > FLOAT_TIE_TOLERANCE * scale
    }

    fn check_tolerance() -> Self {
        FLOAT_CHECK_TOLERANCE
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn definitely_less(&self, other: &Self) -> bool {
        self < other
    }

    fn check_tolerance() -> Self {
        Rational::zero()
    }
}

/// Sums an iterator of scalars.
pub fn sum<T: Scalar>(iter: impl IntoIterator<Item = T>) -> T {
    iter.into_iter().fold(T::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_ties_are_relative() {
        let a = 1.0e6;
        let b = a + 1e-8;
        assert!(!a.definitely_less(&b));
        assert!(a.definitely_less(&(a + 1.0)));
        assert!(!0.0f64.definitely_less(&0.0));
    }

    #[test]
    fn rational_comparisons_are_exact() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(1, 3) + Rational::from_ratio(1, 1_000_000_000_000);
        assert!(a.definitely_less(&b));
        assert_eq!(Rational::from_f64(0.5), Rational::from_ratio(1, 2));
    }
}
