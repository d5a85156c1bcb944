//! Arithmetic carriers and the special functions used by the rest of the crate.
//!
//! Two scalar kinds exist: exact rationals ([`Rat`]) and multi-precision
//! reals ([`Real`]). Generic code is written against [`Scalar`], so a
//! computation seeded with rationals stays exact end to end.

mod combinat;
mod constants;
mod extrapolate;
mod gamma;
mod quadrature;
mod real;
mod zeta;

use std::fmt;
use std::sync::OnceLock;

pub use combinat::{
    binomial, catalan, central_binomial, double_factorial, factorial, normalized_catalan,
    pochhammer_rat,
};
pub use constants::Constants;
pub use extrapolate::{fit_limit, power_rows, solve_linear, FitResult};
pub use gamma::{
    bernoulli, gamma, gamma_rat, gamma_ratio_rat, is_nonpositive_integer, log_gamma, rgamma,
    rgamma_rat,
};
pub use quadrature::{integrate, integrate_half_line, Quadrature};
pub use real::Real;
pub use zeta::zeta;

/// Exact rational number, always kept in canonical form by GMP.
pub type Rat = rug::Rational;

/// Working precision used when nothing else is specified.
pub const DEFAULT_PRECISION: u32 = 256;

/// Environment variable that overrides [`DEFAULT_PRECISION`].
pub const PRECISION_ENV: &str = "PAIRY_PRECISION";

/// Process-wide default precision in bits, read once from the environment.
pub fn default_precision() -> u32 {
    static PREC: OnceLock<u32> = OnceLock::new();
    *PREC.get_or_init(|| {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&p| (32..=1 << 16).contains(&p))
            .unwrap_or(DEFAULT_PRECISION)
    })
}

/// Parses a decimal or fraction literal (`"0.75"`, `"3/4"`, `"1e-3"`) exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: rug::Integer = n.trim().parse().ok()?;
        let d: rug::Integer = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rat::from((n, d)));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: rug::Integer = format!("{int}{frac}0").parse().ok()?;
    let mut r = Rat::from(digits) / 10u32;
    let shift = exp - frac.len() as i32;
    let ten = rug::Integer::from(10);
    if shift >= 0 {
        r *= rug::Integer::from(rug::ops::Pow::pow(&ten, shift as u32));
    } else {
        r /= rug::Integer::from(rug::ops::Pow::pow(&ten, (-shift) as u32));
    }
    if neg {
        r = -r;
    }
    Some(r)
}

/// Scalar kinds usable in series, recursions and the coefficient DP.
///
/// `Ctx` is what is needed to create new constants: nothing for rationals,
/// the precision for reals.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(ctx: Self::Ctx, v: i64) -> Self;
    fn from_rat(ctx: Self::Ctx, v: &Rat) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn is_zero(&self) -> bool;
    fn to_real(&self, prec: u32) -> Real;
    fn to_number(&self) -> Number;
    /// Converts a computed value; rationals reject inexact inputs.
    fn from_number(ctx: Self::Ctx, v: &Number) -> crate::Result<Self>;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 0)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn mul_i64(&self, v: i64) -> Self {
        self.mul(&Self::from_i64(self.ctx(), v))
    }

    fn div_i64(&self, v: i64) -> Self {
        self.div(&Self::from_i64(self.ctx(), v))
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Scalar for Rat {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_i64(_: (), v: i64) -> Self {
        Rat::from(v)
    }
    fn from_rat(_: (), v: &Rat) -> Self {
        v.clone()
    }
    fn add(&self, other: &Self) -> Self {
        Rat::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rat::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat::from(self * other)
    }
    fn div(&self, other: &Self) -> Self {
        Rat::from(self / other)
    }
    fn neg(&self) -> Self {
        Rat::from(-self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += Rat::from(a * b);
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_real(&self, prec: u32) -> Real {
        Real::from_rat(prec, self)
    }
    fn to_number(&self) -> Number {
        Number::Exact(self.clone())
    }
    fn from_number(_: (), v: &Number) -> crate::Result<Self> {
        match v {
            Number::Exact(r) => Ok(r.clone()),
            Number::Approx(x) => Err(crate::Error::NotRational(x.to_sci_string(20))),
        }
    }
}

impl Scalar for Real {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.prec()
    }
    fn from_i64(prec: u32, v: i64) -> Self {
        Real::from_int(prec, v)
    }
    fn from_rat(prec: u32, v: &Rat) -> Self {
        Real::from_rat(prec, v)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Real::add_mul(self, a, b)
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn to_real(&self, prec: u32) -> Real {
        self.with_prec(prec)
    }
    fn to_number(&self) -> Number {
        Number::Approx(self.clone())
    }
    fn from_number(prec: u32, v: &Number) -> crate::Result<Self> {
        Ok(v.to_real(prec))
    }
}

/// A computed value that is either exact or a rounded real.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rat),
    Approx(Real),
}

impl Number {
    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Approx(_) => None,
        }
    }

    pub fn to_real(&self, prec: u32) -> Real {
        match self {
            Number::Exact(r) => Real::from_rat(prec, r),
            Number::Approx(x) => x.with_prec(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64(),
            Number::Approx(x) => x.to_f64(),
        }
    }

    /// `"num/den"` for exact values, `None` otherwise.
    pub fn exact_string(&self) -> Option<String> {
        self.as_rat().map(|r| {
            if *r.denom() == 1 {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        })
    }

    /// Decimal string with `digits` significant digits.
    pub fn decimal_string(&self, digits: usize) -> String {
        self.to_real(digits_to_bits(digits) + 16).to_sci_string(digits)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_string() {
            Some(s) => f.write_str(&s),
            None => fmt::Display::fmt(&self.to_real(default_precision()), f),
        }
    }
}

/// Bits needed to carry `digits` decimal digits.
pub fn digits_to_bits(digits: usize) -> u32 {
    (digits as f64 / std::f64::consts::LOG10_2).ceil() as u32
}

/// Relative difference `|a - b| / max(|a|, |b|)`, or the absolute difference
/// when both are zero-ish.
pub fn rel_diff(a: &Real, b: &Real) -> Real {
    let d = (a - b).abs();
    let scale = a.abs().max(b.abs());
    if scale.is_zero() {
        d
    } else {
        d / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rat_decimals() {
        assert_eq!(parse_rat("0.75").unwrap(), Rat::from((3, 4)));
        assert_eq!(parse_rat("-1.5e-3").unwrap(), Rat::from((-3, 2000)));
        assert_eq!(parse_rat("2").unwrap(), Rat::from(2));
        assert_eq!(parse_rat("3/6").unwrap(), Rat::from((1, 2)));
        assert_eq!(parse_rat(".5").unwrap(), Rat::from((1, 2)));
        assert_eq!(parse_rat("1e2").unwrap(), Rat::from(100));
        assert!(parse_rat("abc").is_none());
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("").is_none());
    }

    #[test]
    fn scalar_pow() {
        let x = Rat::from((2, 3));
        assert_eq!(x.pow_u32(3), Rat::from((8, 27)));
        assert_eq!(x.pow_u32(0), Rat::from(1));
        let y = Real::from_f64(64, 1.5);
        assert_eq!(y.pow_u32(2).to_f64(), 2.25);
    }

    #[test]
    fn number_strings() {
        let n = Number::Exact(Rat::from((5, 64)));
        assert_eq!(n.exact_string().unwrap(), "5/64");
        assert_eq!(Number::Exact(Rat::from(3)).exact_string().unwrap(), "3");
        assert!(n.decimal_string(6).starts_with("7.81250"));
    }
}
