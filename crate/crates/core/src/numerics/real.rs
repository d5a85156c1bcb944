//! Multi-precision real numbers backed by MPFR.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Special};
use rug::{Float, Integer};

use super::Rat;

/// A real number carrying its own mantissa precision (in bits).
///
/// Binary operations produce a result at the larger of the two operand
/// precisions, so a computation seeded at one precision stays there.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Real(Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, v: f64) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_integer(prec: u32, v: &Integer) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_rat(prec: u32, v: &Rat) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn nan(prec: u32) -> Self {
        Real(Float::with_val(prec, Special::Nan))
    }

    /// Parses a decimal literal such as `"0.610375"` or `"-1.5e-3"`.
    pub fn parse(prec: u32, s: &str) -> Option<Self> {
        Float::parse(s).ok().map(|v| Real(Float::with_val(prec, v)))
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Pi))
    }

    pub(crate) fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Exact rational value of the stored binary fraction.
    pub fn to_rat(&self) -> Option<Rat> {
        self.0.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Unit in the last place, `2^(exponent - prec)`.
    pub fn ulp(&self) -> Real {
        let prec = self.prec();
        match self.0.get_exp() {
            Some(e) => Real(Float::with_val(prec, Float::i_exp(1, e - prec as i32))),
            None => Real(Float::with_val(prec, Float::i_exp(1, -(prec as i32)))),
        }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`, or `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn sin(&self) -> Self {
        Real(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        Real(self.0.clone().cos())
    }

    /// `sin(pi x)`, exact zeros at integers.
    pub fn sin_pi(&self) -> Self {
        Real(self.0.clone().sin_pi())
    }

    pub fn cos_pi(&self) -> Self {
        Real(self.0.clone().cos_pi())
    }

    pub fn sinh(&self) -> Self {
        Real(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Self {
        Real(self.0.clone().cosh())
    }

    pub fn atan(&self) -> Self {
        Real(self.0.clone().atan())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn powf(&self, e: &Real) -> Self {
        let prec = self.prec().max(e.prec());
        Real(Float::with_val(prec, rug::ops::Pow::pow(&self.0, &e.0)))
    }

    pub fn powi(&self, e: i32) -> Self {
        Real(Float::with_val(self.prec(), rug::ops::Pow::pow(&self.0, e)))
    }

    pub fn cbrt(&self) -> Self {
        Real(self.0.clone().cbrt())
    }

    pub fn floor(&self) -> Self {
        Real(self.0.clone().floor())
    }

    pub fn round(&self) -> Self {
        Real(self.0.clone().round())
    }

    /// Nearest integer as an `Integer`, `None` for non-finite values.
    pub fn to_integer(&self) -> Option<Integer> {
        self.0.to_integer()
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

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        if !self.0.is_finite() {
            return self.0.to_string_radix(10, None);
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// Decimal digits that the precision supports.
    pub fn significant_digits(&self) -> usize {
        ((self.prec() as f64) * std::f64::consts::LOG10_2).floor() as usize
    }

    /// Full-precision decimal representation.
    pub fn to_decimal_string(&self) -> String {
        self.to_sci_string(self.significant_digits())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sci_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => f.write_str(&self.to_sci_string(d)),
            None => f.write_str(&self.to_decimal_string()),
        }
    }
}

macro_rules! real_binop {
    ($Op:ident, $op:ident, $OpAssign:ident, $op_assign:ident) => {
        impl $Op<&Real> for &Real {
            type Output = Real;
            fn $op(self, rhs: &Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, $Op::$op(&self.0, &rhs.0)))
            }
        }
        impl $Op<Real> for &Real {
            type Output = Real;
            fn $op(self, rhs: Real) -> Real {
                $Op::$op(self, &rhs)
            }
        }
        impl $Op<&Real> for Real {
            type Output = Real;
            fn $op(self, rhs: &Real) -> Real {
                $Op::$op(&self, rhs)
            }
        }
        impl $Op<Real> for Real {
            type Output = Real;
            fn $op(self, rhs: Real) -> Real {
                $Op::$op(&self, &rhs)
            }
        }
        impl $OpAssign<&Real> for Real {
            fn $op_assign(&mut self, rhs: &Real) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                $OpAssign::$op_assign(&mut self.0, &rhs.0);
            }
        }
        impl $OpAssign<Real> for Real {
            fn $op_assign(&mut self, rhs: Real) {
                $OpAssign::$op_assign(self, &rhs);
            }
        }
        impl $Op<i64> for &Real {
            type Output = Real;
            fn $op(self, rhs: i64) -> Real {
                Real(Float::with_val(self.prec(), $Op::$op(&self.0, rhs)))
            }
        }
        impl $Op<i64> for Real {
            type Output = Real;
            fn $op(self, rhs: i64) -> Real {
                $Op::$op(&self, rhs)
            }
        }
        impl $Op<f64> for &Real {
            type Output = Real;
            fn $op(self, rhs: f64) -> Real {
                Real(Float::with_val(self.prec(), $Op::$op(&self.0, rhs)))
            }
        }
        impl $Op<f64> for Real {
            type Output = Real;
            fn $op(self, rhs: f64) -> Real {
                $Op::$op(&self, rhs)
            }
        }
        impl $OpAssign<i64> for Real {
            fn $op_assign(&mut self, rhs: i64) {
                $OpAssign::$op_assign(&mut self.0, rhs);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign);
real_binop!(Sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.prec(), -&self.0))
    }
}

impl Real {
    /// `self += a * b` in one rounding.
    pub fn add_mul(&mut self, a: &Real, b: &Real) {
        let prec = self.prec().max(a.prec()).max(b.prec());
        if prec > self.prec() {
            self.0.set_prec(prec);
        }
        self.0 += &a.0 * &b.0;
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl PartialEq<i64> for Real {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for Real {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(mut iter: I) -> Real {
        let mut acc = match iter.next() {
            Some(x) => x,
            None => return Real::zero(super::default_precision()),
        };
        for x in iter {
            acc += x;
        }
        acc
    }
}
