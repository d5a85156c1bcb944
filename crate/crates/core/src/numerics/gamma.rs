//! Gamma and log-gamma at arbitrary precision.
//!
//! `log_gamma` uses the Stirling series after shifting the argument up past
//! roughly `prec/4`, then walks back down with `Γ(x+1) = xΓ(x)`. Negative
//! arguments go through the reflection formula.

use std::sync::{Mutex, OnceLock};

use rug::Integer;

use super::{factorial, pochhammer_rat, Number, Rat, Real};
use crate::error::{Error, Result};

/// Largest integer argument handled by exact factorials.
const EXACT_FACTORIAL_MAX: u32 = 20_000;

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rat {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rat::from(1)]));
    let mut b = cache.lock().expect("bernoulli cache poisoned");
    while b.len() <= n {
        let m = b.len();
        if m > 1 && m % 2 == 1 {
            b.push(Rat::new());
            continue;
        }
        // sum_{j<m} C(m+1, j) B_j + (m+1) B_m = 0
        let mut acc = Rat::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            if *bj != 0 {
                acc += Rat::from(bj * &binom);
            }
            binom *= (m + 1 - j) as u64;
            binom /= (j + 1) as u64;
        }
        b.push(-acc / Integer::from(m + 1));
    }
    b[n].clone()
}

/// True if `x` is an integer `<= 0`.
pub fn is_nonpositive_integer(x: &Real) -> bool {
    x.is_integer() && !(x > &0i64)
}

fn small_integer(x: &Real) -> Option<i64> {
    if x.is_integer() && x.abs() < (EXACT_FACTORIAL_MAX as i64) + 1 {
        Some(x.to_f64() as i64)
    } else {
        None
    }
}

/// Stirling series for `ln Γ(x)` at `w` bits; `x` must be large enough for
/// the asymptotic tail to fall below `2^-w`.
fn stirling(x: &Real, w: u32) -> Real {
    let x = x.with_prec(w);
    let two_pi = Real::pi(w) * 2i64;
    let mut sum = (&x - 0.5) * x.ln() - &x + two_pi.ln() / 2i64;
    let x2 = &x * &x;
    let mut xpow = x.clone();
    let tiny = Real::from_float(rug::Float::with_val(w, rug::Float::i_exp(1, -(w as i32))));
    let mut prev: Option<Real> = None;
    for k in 1..2000usize {
        let b = bernoulli(2 * k);
        let denom = Rat::from((2 * k * (2 * k - 1)) as u64);
        let coef = Real::from_rat(w, &(b / denom));
        let term = coef / &xpow;
        let mag = term.abs();
        if let Some(p) = &prev {
            if &mag > p {
                // Asymptotic series started diverging; the shift should
                // prevent this, so stop at the smallest term.
                break;
            }
        }
        sum += &term;
        if mag < &tiny * &sum.abs() {
            break;
        }
        prev = Some(mag);
        xpow *= &x2;
    }
    sum
}

fn shift_target(w: u32) -> f64 {
    (w as f64 / 4.0).max(12.0)
}

/// `ln Γ(x)` for `x > 0` at the precision of `x`.
pub fn log_gamma(x: &Real) -> Result<Real> {
    let prec = x.prec();
    if !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {x:?}")));
    }
    if !(x > &0i64) {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {}", x.to_f64())));
    }
    if let Some(n) = small_integer(x) {
        let f = factorial((n - 1) as u32);
        return Ok(Real::from_integer(prec + 64, &f).ln().with_prec(prec));
    }
    let mut guard = 32u32;
    loop {
        let w = prec + guard;
        let xf = x.with_prec(w);
        let target = shift_target(w);
        let n = if xf.to_f64() < target {
            (target - xf.to_f64()).ceil() as i64
        } else {
            0
        };
        let big = stirling(&(&xf + n), w);
        let mut prod = Real::one(w);
        for i in 0..n {
            prod *= &xf + i;
        }
        let res = &big - prod.ln();
        let lost = match (big.exponent(), res.exponent()) {
            (Some(a), Some(b)) => (a - b).max(0) as u32,
            (_, None) => w,
            _ => 0,
        };
        if lost + 16 <= guard || guard > 8 * prec + 256 {
            return Ok(res.with_prec(prec));
        }
        guard = lost + 48;
    }
}

/// `Γ(x)` at the precision of `x`.
pub fn gamma(x: &Real) -> Result<Real> {
    let prec = x.prec();
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite {x:?}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Γ has a pole at {}", x.to_f64())));
    }
    if let Some(n) = small_integer(x) {
        return Ok(Real::from_integer(prec, &factorial((n - 1) as u32)));
    }
    if x > &0i64 {
        // exp(S) has relative error |S| 2^-w, so budget for log2|S|.
        let mag = x.to_f64().abs().max(2.0);
        let extra = (mag * mag.ln()).log2().max(0.0).ceil() as u32;
        let w = prec + 32 + extra;
        let xf = x.with_prec(w);
        let target = shift_target(w);
        let n = if xf.to_f64() < target {
            (target - xf.to_f64()).ceil() as i64
        } else {
            0
        };
        let mut prod = Real::one(w);
        for i in 0..n {
            prod *= &xf + i;
        }
        let g = stirling(&(&xf + n), w).exp() / prod;
        return Ok(g.with_prec(prec));
    }
    // Γ(x) = π / (sin(πx) Γ(1-x))
    let w = prec + 32;
    let xf = x.with_prec(w);
    let s = x.sin_pi().with_prec(w);
    if s.is_zero() {
        return Err(Error::Pole(format!("Γ has a pole at {}", x.to_f64())));
    }
    let one_minus = Real::one(w) - &xf;
    let g = gamma(&one_minus)?;
    Ok((Real::pi(w) / (s * g)).with_prec(prec))
}

/// `1/Γ(x)`, equal to zero at the poles.
pub fn rgamma(x: &Real) -> Result<Real> {
    if is_nonpositive_integer(x) {
        return Ok(Real::zero(x.prec()));
    }
    Ok(gamma(x)?.recip())
}

fn rat_pole(x: &Rat) -> bool {
    *x.denom() == 1 && *x <= 0
}

/// `Γ(x)` for a rational argument; integers and half-integers are evaluated
/// from exact factorials.
pub fn gamma_rat(x: &Rat, prec: u32) -> Result<Real> {
    if rat_pole(x) {
        return Err(Error::Pole(format!("Γ has a pole at {x}")));
    }
    if *x.denom() == 1 {
        let n = x.numer().to_u32().filter(|&n| n <= EXACT_FACTORIAL_MAX + 1);
        if let Some(n) = n {
            return Ok(Real::from_integer(prec, &factorial(n - 1)));
        }
    }
    if *x.denom() == 2 {
        // x = n + 1/2
        let n = Rat::from(x - Rat::from((1, 2)));
        if let Some(n) = n.numer().to_i32().filter(|n| n.unsigned_abs() <= EXACT_FACTORIAL_MAX / 2) {
            let w = prec + 16;
            let sqrt_pi = Real::pi(w).sqrt();
            let m = n.unsigned_abs();
            let f2 = factorial(2 * m);
            let f1 = factorial(m);
            let four_m = Integer::from(1) << (2 * m);
            let r = if n >= 0 {
                Rat::from((f2, four_m * f1))
            } else {
                let sign = if m % 2 == 0 { 1 } else { -1 };
                Rat::from((four_m * f1 * sign, f2))
            };
            return Ok((Real::from_rat(w, &r) * sqrt_pi).with_prec(prec));
        }
    }
    Ok(gamma(&Real::from_rat(prec + 32, x))?.with_prec(prec))
}

/// `1/Γ(x)` for rational `x`, zero at the poles.
pub fn rgamma_rat(x: &Rat, prec: u32) -> Result<Real> {
    if rat_pole(x) {
        return Ok(Real::zero(prec));
    }
    Ok(gamma_rat(x, prec)?.recip())
}

/// `Γ(x)/Γ(y)`, exact when `x - y` is an integer.
///
/// When both arguments sit on poles the ratio is taken as the limit of
/// `Γ(x+t)/Γ(y+t)` as `t -> 0`; a pole only in `y` gives 0.
pub fn gamma_ratio_rat(x: &Rat, y: &Rat, prec: u32) -> Result<Number> {
    let d = Rat::from(x - y);
    let xp = rat_pole(x);
    let yp = rat_pole(y);
    if xp && !yp {
        return Err(Error::Pole(format!("Γ({x})/Γ({y}) has a pole")));
    }
    if yp && !xp {
        return Ok(Number::Exact(Rat::new()));
    }
    if xp && yp {
        // Γ(-m + t) ~ (-1)^m / (m! t)
        let mx = (-x.numer().clone()).to_u32().expect("pole index fits u32");
        let my = (-y.numer().clone()).to_u32().expect("pole index fits u32");
        let sign = if (mx + my) % 2 == 0 { 1 } else { -1 };
        return Ok(Number::Exact(Rat::from((factorial(my) * sign, factorial(mx)))));
    }
    if *d.denom() == 1 {
        if let Some(n) = d.numer().to_i64().filter(|n| n.unsigned_abs() <= 1 << 20) {
            let r = if n >= 0 {
                pochhammer_rat(y, n as u32)
            } else {
                let p = pochhammer_rat(x, (-n) as u32);
                Rat::from(1) / p
            };
            return Ok(Number::Exact(r));
        }
    }
    let w = prec + 16;
    Ok(Number::Approx(
        (gamma_rat(x, w)? / gamma_rat(y, w)?).with_prec(prec),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn mpfr_gamma(x: &Real) -> Real {
        Real::from_float(Float::with_val(x.prec(), x.as_float().gamma_ref()))
    }

    fn mpfr_lngamma(x: &Real) -> Real {
        Real::from_float(Float::with_val(x.prec(), x.as_float().ln_gamma_ref()))
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        super::super::rel_diff(a, b).to_f64()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rat::from((-1, 2)));
        assert_eq!(bernoulli(2), Rat::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(4), Rat::from((-1, 30)));
        assert_eq!(bernoulli(12), Rat::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rat::from((-174611, 330)));
    }

    #[test]
    fn gamma_simple_values() {
        let p = 256;
        let sqrt_pi = Real::pi(p).sqrt();
        let half = Real::from_f64(p, 0.5);
        assert!(rel(&gamma(&half).unwrap(), &sqrt_pi) < 1e-74);
        let mhalf = Real::from_f64(p, -0.5);
        assert!(rel(&gamma(&mhalf).unwrap(), &(sqrt_pi.clone() * -2i64)) < 1e-74);
        assert_eq!(gamma(&Real::from_int(p, 5)).unwrap(), 24i64);
        assert!(matches!(gamma(&Real::from_int(p, 0)), Err(Error::Pole(_))));
        assert!(matches!(gamma(&Real::from_int(p, -3)), Err(Error::Pole(_))));
        assert!(rgamma(&Real::from_int(p, -3)).unwrap().is_zero());
    }

    #[test]
    fn gamma_against_mpfr() {
        let p = 256;
        for v in [0.001, 0.1, 0.75, 1.25, 1.5, 2.5, 3.3, 10.25, 49.9, 170.6, 1234.5] {
            let x = Real::from_f64(p, v);
            let r = rel(&gamma(&x).unwrap(), &mpfr_gamma(&x));
            assert!(r < 1e-74, "x={v}: rel {r:e}");
            let r = rel(&log_gamma(&x).unwrap(), &mpfr_lngamma(&x));
            assert!(r < 1e-74, "ln x={v}: rel {r:e}");
        }
        for v in [-0.3, -1.5, -2.75, -10.1, -33.3] {
            let x = Real::from_f64(p, v);
            let r = rel(&gamma(&x).unwrap(), &mpfr_gamma(&x));
            assert!(r < 1e-72, "x={v}: rel {r:e}");
        }
    }

    #[test]
    fn log_gamma_near_roots() {
        // ln Γ vanishes at 1 and 2; relative accuracy must survive.
        let p = 256;
        for v in [1.0 + 1e-12, 2.0 - 1e-9, 1.4616321449683622] {
            let x = Real::from_f64(p, v);
            let r = rel(&log_gamma(&x).unwrap(), &mpfr_lngamma(&x));
            assert!(r < 1e-72, "x={v}: rel {r:e}");
        }
        assert!(log_gamma(&Real::one(p)).unwrap().is_zero());
        assert!(matches!(log_gamma(&Real::zero(p)), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_product_recursion() {
        // ln Γ(10.25) from Γ(0.25) walked up by Γ(x+1) = xΓ(x).
        let p = 256;
        let base = Real::from_f64(p, 0.25);
        let mut acc = log_gamma(&base).unwrap();
        for i in 0..10 {
            acc += (&base + i).ln();
        }
        let direct = log_gamma(&Real::from_f64(p, 10.25)).unwrap();
        assert!(rel(&acc, &direct) < 1e-74);
    }

    #[test]
    fn factorials_exactly_rounded() {
        for n in 0..=30u32 {
            let g = gamma(&Real::from_int(256, n as i64 + 1)).unwrap();
            assert_eq!(g.to_integer().unwrap(), factorial(n));
        }
    }

    #[test]
    fn gamma_rat_half_integers() {
        let p = 256;
        for n in -6i64..8 {
            let x = Rat::from((2 * n + 1, 2));
            let a = gamma_rat(&x, p).unwrap();
            let b = mpfr_gamma(&Real::from_rat(p, &x));
            assert!(rel(&a, &b) < 1e-74, "n={n}");
        }
    }

    #[test]
    fn gamma_ratio_exact_and_limits() {
        let p = 128;
        let r = gamma_ratio_rat(&Rat::from((5, 2)), &Rat::from((1, 2)), p).unwrap();
        assert_eq!(r, Number::Exact(Rat::from((3, 4))));
        let r = gamma_ratio_rat(&Rat::from((1, 2)), &Rat::from((5, 2)), p).unwrap();
        assert_eq!(r, Number::Exact(Rat::from((4, 3))));
        assert_eq!(
            gamma_ratio_rat(&Rat::from(1), &Rat::from(-2), p).unwrap(),
            Number::Exact(Rat::new())
        );
        assert!(gamma_ratio_rat(&Rat::from(-1), &Rat::from(1), p).is_err());
        // Γ(-1+t)/Γ(-2+t) -> -2
        assert_eq!(
            gamma_ratio_rat(&Rat::from(-1), &Rat::from(-2), p).unwrap(),
            Number::Exact(Rat::from(-2))
        );
        let r = gamma_ratio_rat(&Rat::from((1, 3)), &Rat::from((1, 5)), p).unwrap();
        assert!(!r.is_exact());
    }
}
