//! Binary floating point at a configurable precision, backed by `dashu-float`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{
    ops::{BitTest, UnsignedAbs},
    IBig, Sign as DSign, UBig,
};
use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::rational::Rational;
use super::ring::{ExactDiv, Field};

type Inner = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION: usize = 256;

/// Arbitrary precision binary float. Binary operations round to the larger of
/// the operand precisions, so precision never drops silently. `zero()` and
/// `one()` carry no precision of their own and adopt that of the other operand.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat(Inner);

fn to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl BigFloat {
    pub fn from_rational(r: &Rational, precision: usize) -> Self {
        let num = Inner::from(to_ibig(r.numer())).with_precision(precision).value();
        let den = Inner::from(to_ibig(r.denom())).with_precision(precision).value();
        BigFloat(num / den)
    }

    pub fn from_i64(v: i64, precision: usize) -> Self {
        BigFloat(Inner::from(v).with_precision(precision).value())
    }

    pub fn from_f64(v: f64, precision: usize) -> Self {
        let f = Inner::try_from(v).expect("finite f64");
        BigFloat(f.with_precision(precision).value())
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        BigFloat(self.0.clone().with_precision(precision).value())
    }

    pub fn is_negative(&self) -> bool {
        self.0.repr().sign() == DSign::Negative && !self.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_negative() && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `log2|x|` to double precision; `-inf` for zero. Works far outside the
    /// `f64` exponent range.
    pub fn log2_abs(&self) -> f64 {
        let repr = self.0.repr();
        let sig = repr.significand();
        if sig.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag: UBig = sig.unsigned_abs();
        let bits = mag.bit_len();
        let (top, dropped) = if bits > 60 { (&mag >> (bits - 60), bits - 60) } else { (mag.clone(), 0) };
        let top: u64 = top.try_into().expect("60-bit window fits u64");
        (top as f64).log2() + dropped as f64 + repr.exponent() as f64
    }

    /// Natural log of `|x|`, double precision.
    pub fn ln_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn inner(&self) -> &FBig<HalfEven, 2> {
        &self.0
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({:e}, {} bits)", self.to_f64(), self.precision())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 20 significant decimal digits is plenty for reports.
        let dec = self.0.to_decimal().value().with_precision(20).value();
        write!(f, "{dec}")
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat(Inner::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat(Inner::ONE)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: BigFloat) -> BigFloat {
        &self / &rhs
    }
}

impl<'a> Div<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &'a BigFloat) -> BigFloat {
        // Exact operands (precision 0) would make the quotient unbounded.
        if self.precision() == 0 && rhs.precision() == 0 {
            let lhs = self.with_precision(DEFAULT_PRECISION);
            return BigFloat(&lhs.0 / &rhs.0);
        }
        BigFloat(&self.0 / &rhs.0)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl ExactDiv for BigFloat {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl Field for BigFloat {}

impl PartialEq<f64> for BigFloat {
    fn eq(&self, other: &f64) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd<f64> for BigFloat {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        let o = Inner::try_from(*other).ok()?;
        self.0.partial_cmp(&o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    #[test]
    fn keeps_precision() {
        let a = BigFloat::from_rational(&rat(1, 3), 300);
        let b = BigFloat::from_i64(2, 300);
        let c = &a * &b;
        assert_eq!(c.precision(), 300);
        assert_eq!((c + BigFloat::zero()).precision(), 300);
        let third = BigFloat::from_rational(&rat(1, 3), 300);
        let err = (&(&third * &BigFloat::from_i64(3, 300)) - &BigFloat::one()).abs();
        assert!(err.log2_abs() < -290.0);
    }

    #[test]
    fn log2_of_tiny_values() {
        let tiny = BigFloat::from_rational(&(rat(1, 10).pow(91) * rat(32, 3)), 512);
        let expect = (32.0f64 / 3.0).log2() - 91.0 * 10f64.log2();
        assert!((tiny.log2_abs() - expect).abs() < 1e-9);
        assert!((-tiny).log2_abs().is_finite());
    }

    #[test]
    fn sign_queries() {
        let m = BigFloat::from_i64(-5, 64);
        assert!(m.is_negative());
        assert!(!BigFloat::zero().is_negative());
        assert_eq!(m.abs().to_f64(), 5.0);
    }
}
