//! Double-exponential quadrature over `Real`.
//!
//! Finite intervals use the tanh-sinh map and the half line uses exp-sinh.
//! Both halve the step until two successive levels agree.

use super::Real;
use crate::error::{Error, Result};

/// Result of a quadrature.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Real,
    /// Difference between the last two refinement levels.
    pub error: Real,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 12;

struct Rule<'a> {
    prec: u32,
    /// Maps `t` to `(x, dx/dt)`; `None` when the node is numerically on an
    /// endpoint and should be skipped.
    map: Box<dyn Fn(&Real) -> Option<(Real, Real)> + 'a>,
}

fn run<F>(rule: &Rule<'_>, mut f: F, tol: f64) -> Result<Quadrature>
where
    F: FnMut(&Real) -> Result<Real>,
{
    let prec = rule.prec;
    let eps = Real::from_f64(prec, 2f64.powi(-(prec as i32) + 8));
    let mut evals = 0usize;

    // Sum over nodes t = offset + j*step for j = 0, ±1, ±2, ... until the
    // contributions die out in both directions.
    let mut sweep = |offset: &Real, step: &Real, include_zero: bool| -> Result<Real> {
        let mut total = Real::zero(prec);
        for dir in [1i64, -1] {
            let mut small = 0;
            let start = if include_zero && dir == 1 { 0 } else { 1 };
            for j in start..100_000i64 {
                let t = offset + &(step * (dir * j));
                if t.abs() > 12i64 {
                    break;
                }
                let Some((x, w)) = (rule.map)(&t) else {
                    break;
                };
                if w.is_zero() || !w.is_finite() {
                    break;
                }
                let fx = f(&x)?;
                evals += 1;
                let term = fx * w;
                let negligible = term.abs() <= &eps * &total.abs().max(Real::from_f64(prec, 1e-300));
                total += &term;
                if negligible {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
            }
        }
        Ok(total)
    };

    let mut h = Real::one(prec);
    let mut sum = sweep(&Real::zero(prec), &h, true)?;
    let mut value = &sum * &h;
    let mut error = value.abs();
    for _ in 1..=MAX_LEVEL {
        let half = &h / 2i64;
        // New nodes sit at odd multiples of the halved step.
        let odd = sweep(&half, &h, true)?;
        sum += odd;
        h = half;
        let next = &sum * &h;
        error = (&next - &value).abs();
        value = next;
        let scale = value.abs().max(Real::one(prec));
        if error.to_f64() <= tol * scale.to_f64() {
            return Ok(Quadrature {
                value,
                error,
                evaluations: evals,
            });
        }
    }
    Err(Error::Convergence(format!(
        "quadrature did not reach tolerance {tol:e}; last difference {:e}",
        error.to_f64()
    )))
}

/// `∫_a^b f(x) dx` by tanh-sinh quadrature.
pub fn integrate<F>(f: F, a: &Real, b: &Real, tol: f64) -> Result<Quadrature>
where
    F: FnMut(&Real) -> Result<Real>,
{
    let prec = a.prec().max(b.prec());
    let half_pi = Real::pi(prec) / 2i64;
    let rad = (b - a) / 2i64;
    let a = a.clone();
    let b = b.clone();
    let map = move |t: &Real| -> Option<(Real, Real)> {
        let u = &half_pi * t.sinh();
        // distance to the nearer endpoint, computed without cancellation:
        // 1 - tanh|u| = 2 / (1 + e^{2|u|})
        let e = (u.abs() * 2i64).exp();
        let comp = Real::from_int(prec, 2) / (&e + 1i64);
        let d = &rad * &comp;
        let x = if u.is_sign_negative() { &a + &d } else { &b - &d };
        if x <= a || x >= b {
            return None;
        }
        let cosh_u = u.cosh();
        let w = &rad * &half_pi * t.cosh() / (&cosh_u * &cosh_u);
        Some((x, w))
    };
    run(
        &Rule {
            prec,
            map: Box::new(map),
        },
        f,
        tol,
    )
}

/// `∫_a^∞ f(x) dx` by exp-sinh quadrature.
pub fn integrate_half_line<F>(f: F, a: &Real, tol: f64) -> Result<Quadrature>
where
    F: FnMut(&Real) -> Result<Real>,
{
    let prec = a.prec();
    let half_pi = Real::pi(prec) / 2i64;
    let a = a.clone();
    let map = move |t: &Real| -> Option<(Real, Real)> {
        let e = (&half_pi * t.sinh()).exp();
        if e.is_zero() || !e.is_finite() {
            return None;
        }
        let x = &a + &e;
        if x <= a {
            return None;
        }
        let w = &half_pi * t.cosh() * &e;
        Some((x, w))
    };
    run(
        &Rule {
            prec,
            map: Box::new(map),
        },
        f,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_on_interval() {
        let a = Real::zero(128);
        let b = Real::from_int(128, 2);
        let q = integrate(|x| Ok(x * x), &a, &b, 1e-30).unwrap();
        assert!((q.value - Real::from_int(128, 8) / 3i64).abs() < 1e-30);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let a = Real::zero(128);
        let b = Real::one(128);
        let q = integrate(|x| Ok(x.sqrt().recip()), &a, &b, 1e-25).unwrap();
        assert!((q.value - 2i64).abs() < 1e-20);
    }

    #[test]
    fn half_line_gaussian() {
        // ∫_0^∞ e^{-x^2} dx = √π/2
        let a = Real::zero(128);
        let q = integrate_half_line(|x| Ok((-(x * x)).exp()), &a, 1e-25).unwrap();
        let want = Real::pi(128).sqrt() / 2i64;
        assert!((q.value - want).abs() < 1e-22);
    }

    #[test]
    fn half_line_with_log_singularity() {
        // ∫_0^∞ e^{-x} ln x dx = -γ
        let a = Real::zero(128);
        let q = integrate_half_line(|x| Ok((-x).exp() * x.ln()), &a, 1e-25).unwrap();
        let g = super::super::Constants::get(128).euler_gamma.clone();
        assert!((q.value + g).abs() < 1e-22);
    }
}
