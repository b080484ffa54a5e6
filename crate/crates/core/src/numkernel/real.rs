//! Arbitrary-precision real scalar backed by MPFR.
//!
//! Every value is created at the process-wide working precision (see
//! [`working_precision`]). Binary operators on references allocate their
//! result at that precision; operators on owned values reuse the left
//! operand's storage, which carries the same precision.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Default mantissa width in bits.
pub const DEFAULT_PRECISION: u32 = 256;

static PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

/// Current working precision in mantissa bits.
pub fn working_precision() -> u32 {
    PRECISION.load(AtomicOrdering::Relaxed)
}

/// Sets the working precision. Values created before the change keep their
/// old precision, so call this once at start-up.
pub fn set_working_precision(bits: u32) {
    assert!(bits >= 64, "working precision must be at least 64 bits");
    PRECISION.store(bits, AtomicOrdering::Relaxed);
}

/// `floor(bits * log10(2))`, the number of reliable decimal digits.
pub fn precision_digits() -> u32 {
    (f64::from(working_precision()) * std::f64::consts::LOG10_2).floor() as u32
}

/// Tolerance `10^-(precision_digits / divisor)` (integer division of the
/// digit count), the convention used by every invariant check.
pub fn tol(divisor: u32) -> BigReal {
    let exp = precision_digits() / divisor;
    BigReal::from(10).powi(-(exp as i32))
}

#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero() -> Self {
        BigReal(Float::new(working_precision()))
    }

    pub fn one() -> Self {
        BigReal::from(1)
    }

    pub fn from_f64(x: f64) -> Self {
        BigReal(Float::with_val(working_precision(), x))
    }

    /// `num / den` computed at working precision.
    pub fn ratio(num: i64, den: i64) -> Self {
        BigReal::from(num) / BigReal::from(den)
    }

    /// Parses a decimal string directly at working precision.
    pub fn parse(s: &str) -> Result<Self> {
        let incomplete = Float::parse(s.trim())
            .map_err(|e| Error::Parse(format!("`{s}` is not a decimal number: {e}")))?;
        Ok(BigReal(Float::with_val(working_precision(), incomplete)))
    }

    pub fn pi() -> Self {
        BigReal(Float::with_val(working_precision(), Constant::Pi))
    }

    /// Machine epsilon `2^(1 - precision)`.
    pub fn epsilon() -> Self {
        let one = Float::with_val(working_precision(), 1);
        BigReal(one >> (working_precision() - 1))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    /// `ln Γ(x)` for `x > 0`.
    pub fn ln_gamma(&self) -> Self {
        BigReal(self.0.clone().ln_gamma())
    }

    pub fn powi(&self, k: i32) -> Self {
        BigReal(Pow::pow(self.0.clone(), k))
    }

    pub fn pow(&self, e: &BigReal) -> Self {
        BigReal(Pow::pow(self.0.clone(), &e.0))
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        BigReal(self.0.clone().square())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn factorial(k: u32) -> Self {
        BigReal(Float::with_val(working_precision(), Float::factorial(k)))
    }

    /// Decimal rendering with enough digits to read the value back exactly.
    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix(10, None)
    }

    /// Shortest decimal string that parses back to exactly this value at the
    /// working precision. Trailing mantissa zeros are removed.
    pub fn to_shortest_decimal(&self) -> String {
        if !self.0.is_finite() || self.0.is_zero() {
            return self.to_decimal();
        }
        let max = precision_digits() as usize + 3;
        for digits in 1..=max {
            let s = self.to_decimal_digits(digits);
            if BigReal::parse(&s).is_ok_and(|v| v == *self) {
                return trim_mantissa(&s);
            }
        }
        self.to_decimal()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
}

fn trim_mantissa(s: &str) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => s.split_at(i),
        None => (s, ""),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    format!("{mant}{exp}")
}

impl From<i64> for BigReal {
    fn from(v: i64) -> Self {
        BigReal(Float::with_val(working_precision(), v))
    }
}

impl From<i32> for BigReal {
    fn from(v: i32) -> Self {
        BigReal(Float::with_val(working_precision(), v))
    }
}

impl From<usize> for BigReal {
    fn from(v: usize) -> Self {
        BigReal(Float::with_val(working_precision(), v))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_decimal_digits(p)),
            None => write!(f, "{}", self.to_decimal()),
        }
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_digits(24))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                BigReal($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                BigReal(Float::with_val(
                    working_precision(),
                    $trait::$method(&self.0, &rhs.0),
                ))
            }
        }
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal(Float::with_val(
                    working_precision(),
                    $trait::$method(&self.0, &rhs.0),
                ))
            }
        }
        impl $trait<i64> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                BigReal($trait::$method(self.0, rhs))
            }
        }
        impl $trait<i64> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                BigReal(Float::with_val(
                    working_precision(),
                    $trait::$method(&self.0, rhs),
                ))
            }
        }
        impl $assign_trait<BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: BigReal) {
                $assign_trait::$assign_method(&mut self.0, rhs.0);
            }
        }
        impl $assign_trait<&BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: &BigReal) {
                $assign_trait::$assign_method(&mut self.0, &rhs.0);
            }
        }
        impl $assign_trait<i64> for BigReal {
            fn $assign_method(&mut self, rhs: i64) {
                $assign_trait::$assign_method(&mut self.0, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(self.0.clone().neg())
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(iter: I) -> BigReal {
        iter.fold(BigReal::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigReal> for BigReal {
    fn sum<I: Iterator<Item = &'a BigReal>>(iter: I) -> BigReal {
        iter.fold(BigReal::zero(), |acc, x| acc + x)
    }
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: &BigReal, b: &BigReal, floor: &BigReal) -> BigReal {
    let scale = a.abs().max(b.abs()).max(floor.clone());
    if scale.is_zero() {
        return BigReal::zero();
    }
    (a - b).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_exact_beyond_double() {
        let a = BigReal::parse("0.1").unwrap();
        let b = BigReal::ratio(1, 10);
        assert_eq!(a, b);
        assert_ne!(a, BigReal::from_f64(0.1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(BigReal::parse("1.2.3"), Err(Error::Parse(_))));
    }

    #[test]
    fn digits_and_tolerances() {
        assert_eq!(precision_digits(), 77);
        assert!(tol(4) < BigReal::parse("1e-18").unwrap());
        assert!(tol(4) > BigReal::parse("1e-20").unwrap());
    }

    #[test]
    fn ln_gamma_matches_factorial() {
        let x = BigReal::from(11).ln_gamma();
        let f = BigReal::factorial(10).ln();
        assert!((x - f).abs() < tol(2));
    }

    #[test]
    fn decimal_round_trip() {
        let x = BigReal::ratio(183, 20).sqrt() / 7;
        let s = x.to_decimal();
        assert_eq!(BigReal::parse(&s).unwrap(), x);
        assert_eq!(BigReal::parse(&x.to_shortest_decimal()).unwrap(), x);
    }

    #[test]
    fn shortest_decimal_forms() {
        assert_eq!(BigReal::ratio(-183, 20).to_shortest_decimal(), "-9.15");
        assert_eq!(BigReal::from(101).to_shortest_decimal(), "101");
        assert_eq!(BigReal::zero().to_shortest_decimal(), "0");
        assert_eq!(BigReal::parse("1.25e-30").unwrap().to_shortest_decimal(), "1.25e-30");
    }
}
