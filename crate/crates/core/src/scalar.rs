//! Coefficient domains shared by the word-series algebra and the scheme
//! catalog: exact rationals for everything with rational coefficients,
//! `f64` for irrational coefficient sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar ring used for splitting coefficients and series coefficients.
///
/// `EXACT` distinguishes domains where equality checks are exact (rationals)
/// from floating point, where callers must supply a tolerance.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_f64(&self) -> f64 {
        ToPrimitive::to_f64(&Signed::abs(self)).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Shorthand for an exact rational coefficient.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::from_ratio(numer, denom)
}

/// Formats a scalar for reports: rationals as `n/d`, floats with
/// 17 significant digits.
pub fn format_scalar<C: Scalar>(value: &C) -> String {
    if C::EXACT {
        format!("{value}")
    } else {
        format!("{:.16e}", value.to_f64())
    }
}
