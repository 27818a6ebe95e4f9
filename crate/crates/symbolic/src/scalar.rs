//! Coefficient types.
//!
//! Everything in this crate is generic over an exact scalar field. Floating
//! point types are deliberately not admitted: canonical normal forms rely on
//! exact zero tests and exact gcds.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact coefficient field (rationals of some precision).
pub trait Scalar:
    Num + Signed + Clone + Eq + Ord + Hash + Debug + Display + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `num / den`. Panics if `den` is zero or the value is not representable.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    /// Numerator and positive denominator in lowest terms.
    fn to_ratio(&self) -> (BigInt, BigInt);

    fn half() -> Self {
        Self::from_i64(1) / Self::from_i64(2)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        let n = num.to_i64().expect("numerator exceeds i64");
        let d = den.to_i64().expect("denominator exceeds i64");
        Ratio::new(n, d)
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Minimal field interface used by the exact linear algebra routines.
///
/// Implemented by every [`Scalar`] and by [`crate::RatFunc`], so that the same
/// elimination code runs over constants and over rational functions.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Rough size used to pick elimination pivots; constants cost 0.
    fn pivot_cost(&self) -> usize {
        0
    }
}

impl<T: Scalar> Field for T
where
    T: for<'a> Add<&'a T, Output = T> + for<'a> Sub<&'a T, Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(T::one() / self.clone())
        }
    }
}

/// Render a scalar in the expression grammar (`p` or `p/q`).
pub fn format_scalar<C: Scalar>(c: &C) -> String {
    let (n, d) = c.to_ratio();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_roundtrip() {
        let q = BigRational::from_ratio(&BigInt::from(-6), &BigInt::from(4));
        assert_eq!(q.to_ratio(), (BigInt::from(-3), BigInt::from(2)));
        assert_eq!(format_scalar(&q), "-3/2");
        let r = <Ratio<i64> as Scalar>::from_ratio(&BigInt::from(2), &BigInt::from(4));
        assert_eq!(format_scalar(&r), "1/2");
        assert_eq!(BigRational::half() + BigRational::half(), BigRational::one());
    }

    #[test]
    fn field_inverse() {
        let q = BigRational::from_i64(5);
        assert_eq!(Field::inverse(&q).unwrap() * q, BigRational::one());
        assert!(Field::inverse(&BigRational::zero()).is_none());
    }
}
