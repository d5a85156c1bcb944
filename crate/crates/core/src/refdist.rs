//! The area-Airy law, used as an independent reference at `p = 1`.
//!
//! Scale: Dyck excursions of semi-length `N` have area statistics whose
//! `N^(3/2)`-rescaled moments are `2^(s/2)` times the area-Airy moments
//! (`M̄_s(1) = 2^(s/2) E[X^s]`). So the rescaled lattice statistic converges
//! to `√2 X`, with density `f_Ai(x/√2)/√2`. [`DYCK_SCALE`] is this `√2`.
//!
//! Zeros of Ai are stored as magnitudes `a_k > 0`, so `Ai(-a_k) = 0`.

use std::collections::HashMap;
use std::f64::consts::LOG2_E;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_half_line, rgamma, rgamma_rat, gamma, Rat, Real};

pub const DYCK_SCALE: f64 = std::f64::consts::SQRT_2;
/// Default cap on the number of terms of the density series.
pub const DENSITY_TERM_CAP: usize = 2_000;
/// Default cap on the number of terms of the Laplace series.
pub const LAPLACE_TERM_CAP: usize = 2_000_000;
/// Zeros beyond this index come from the asymptotic formula, accurate to
/// about `t^-12` relative with `t = 3π(4k-1)/8 > 2300`.
const REFINED_ZEROS: usize = 500;

fn log2_abs(x: &Real) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        x.abs().ln().to_f64() * LOG2_E
    }
}

fn two_pow(w: u32, e: i32) -> Real {
    Real::from_int(w, 2).powi(e)
}

// ---------------------------------------------------------------- Ai

/// `Ai(x)` at the precision of `x`.
pub fn airy_ai(x: &Real) -> Result<Real> {
    let prec = x.prec();
    if !x.is_finite() {
        return Err(Error::Domain("Ai of a non-finite argument".into()));
    }
    if use_asymptotic(x.to_f64().abs(), prec) {
        let r = if x.is_sign_negative() {
            ai_asymptotic_neg(&x.abs(), prec)
        } else {
            ai_asymptotic_pos(x, prec)
        };
        if let Some(r) = r {
            return Ok(r);
        }
    }
    ai_maclaurin(x, prec)
}

// The asymptotic series is truncated near its smallest term, about
// e^(-2ζ); use it once that is below the target.
fn use_asymptotic(xabs: f64, prec: u32) -> bool {
    let zeta = 2.0 / 3.0 * xabs.powf(1.5);
    2.0 * zeta * LOG2_E > (prec + 16) as f64
}

pub(crate) fn ai_maclaurin(x: &Real, prec: u32) -> Result<Real> {
    let xabs = x.to_f64().abs();
    let zeta = 2.0 / 3.0 * xabs.powf(1.5);
    // terms reach e^ζ; for x > 0 the result is also down to e^-ζ
    let lost = if x.is_sign_negative() { zeta } else { 2.0 * zeta };
    let w = prec + (lost * LOG2_E).ceil() as u32 + 24;
    let x = x.with_prec(w);
    let x3 = x.powi(3);
    let third = Rat::from((1, 3));
    let c1 = rgamma_rat(&Rat::from((2, 3)), w)? / Real::from_int(w, 3).powf(&Real::from_rat(w, &(Rat::from(2) * &third)));
    let c2 = rgamma_rat(&third, w)? / Real::from_int(w, 3).cbrt();
    let mut f = Real::one(w);
    let mut g = x.clone();
    let mut t = Real::one(w);
    let mut u = x.clone();
    let eps = two_pow(w, -(w as i32));
    let peak = x3.abs().to_f64();
    for k in 1i64..1_000_000 {
        t = t * &x3 / ((3 * k - 1) * (3 * k));
        u = u * &x3 / ((3 * k) * (3 * k + 1));
        f += &t;
        g += &u;
        let scale = f.abs() + g.abs() + 1i64;
        if ((9 * k * k) as f64) > peak && t.abs() < &eps * &scale && u.abs() < &eps * &scale {
            return Ok((c1 * f - c2 * g).with_prec(prec));
        }
    }
    Err(Error::Convergence("Ai Maclaurin series".into()))
}

// u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!), summed as u_k ζ^-k.
fn ai_asymptotic_terms(zeta: &Real, w: u32, mut each: impl FnMut(usize, Real)) -> bool {
    let eps = two_pow(w, -(w as i32));
    let mut term = Real::one(w);
    each(0, term.clone());
    for k in 1i64..10_000 {
        let next = &term * ((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / (216 * k * (2 * k - 1)) / zeta;
        if next.abs() > term.abs() {
            return false;
        }
        each(k as usize, next.clone());
        if next.abs() < eps {
            return true;
        }
        term = next;
    }
    false
}

pub(crate) fn ai_asymptotic_neg(x: &Real, prec: u32) -> Option<Real> {
    let w = prec + 16;
    let x = x.with_prec(w);
    let zeta = x.powf(&Real::from_f64(w, 1.5)) * 2i64 / 3i64;
    let mut p = Real::zero(w);
    let mut q = Real::zero(w);
    let ok = ai_asymptotic_terms(&zeta, w, |k, t| {
        let neg = (k / 2) % 2 == 1;
        let t = if neg { -t } else { t };
        if k % 2 == 0 {
            p += t;
        } else {
            q += t;
        }
    });
    if !ok {
        return None;
    }
    let phase = &zeta - Real::pi(w) / 4i64;
    let norm = Real::pi(w).sqrt() * x.sqrt().sqrt();
    Some(((phase.cos() * p + phase.sin() * q) / norm).with_prec(prec))
}

fn ai_asymptotic_pos(x: &Real, prec: u32) -> Option<Real> {
    let w = prec + 16;
    let x = x.with_prec(w);
    let zeta = x.powf(&Real::from_f64(w, 1.5)) * 2i64 / 3i64;
    let mut s = Real::zero(w);
    let ok = ai_asymptotic_terms(&zeta, w, |k, t| {
        if k % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    });
    if !ok {
        return None;
    }
    let norm = Real::pi(w).sqrt() * x.sqrt().sqrt() * 2i64;
    Some(((-zeta).exp() * s / norm).with_prec(prec))
}

// ---------------------------------------------------------------- zeros

/// `a_k ≈ T(3π(4k-1)/8)` with
/// `T(t) = t^(2/3)(1 + 5/48 t^-2 - 5/36 t^-4 + ...)`.
pub fn airy_zero_asymptotic(k: usize, prec: u32) -> Real {
    let w = prec + 16;
    let t = Real::pi(w) * 3i64 * (4 * k as i64 - 1) / 8i64;
    let t2 = (&t * &t).recip();
    let coeffs: [(i64, i64); 6] = [
        (1, 1),
        (5, 48),
        (-5, 36),
        (77125, 82944),
        (-108056875, 6967296),
        (162375596875, 334430208),
    ];
    let mut s = Real::zero(w);
    let mut pw = Real::one(w);
    for (n, d) in coeffs {
        s += &pw * n / d;
        pw *= &t2;
    }
    (t.powf(&Real::from_rat(w, &Rat::from((2, 3)))) * s).with_prec(prec)
}

/// Magnitude of the `k`-th zero of Ai, refined by the secant method on
/// `x ↦ Ai(-x)` from the asymptotic seed.
pub fn airy_zero(k: usize, prec: u32) -> Result<Real> {
    if k == 0 {
        return Err(Error::InvalidArgument("zeros are numbered from 1".into()));
    }
    let w = prec + 32;
    let f = |x: &Real| airy_ai(&-x.clone());
    let mut x0 = airy_zero_asymptotic(k, w);
    let mut x1 = &x0 * (Real::one(w) + two_pow(w, -24));
    let mut f0 = f(&x0)?;
    let mut f1 = f(&x1)?;
    let tol = two_pow(w, -(prec as i32) - 8);
    for _ in 0..200 {
        if f1.is_zero() {
            return Ok(x1.with_prec(prec));
        }
        let denom = &f1 - &f0;
        if denom.is_zero() {
            break;
        }
        let x2 = &x1 - &f1 * (&x1 - &x0) / denom;
        let done = (&x2 - &x1).abs() <= &tol * &x2;
        x0 = std::mem::replace(&mut x1, x2);
        f0 = std::mem::replace(&mut f1, f(&x1)?);
        if done {
            return Ok(x1.with_prec(prec));
        }
    }
    Err(Error::Convergence(format!("Airy zero {k} did not converge")))
}

fn round_prec(prec: u32) -> u32 {
    prec.div_ceil(64) * 64
}

/// `a_1 .. a_count` at (at least) `prec` bits, cached per precision.
fn zeros(count: usize, prec: u32) -> Result<Vec<Real>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Real>>>> = OnceLock::new();
    let prec = round_prec(prec);
    let cache = CACHE.get_or_init(Default::default);
    let have: Vec<Real> = cache
        .lock()
        .expect("zero cache poisoned")
        .get(&prec)
        .map(|v| v.iter().take(count).cloned().collect())
        .unwrap_or_default();
    if have.len() >= count {
        return Ok(have);
    }
    let mut out = have;
    for k in out.len() + 1..=count {
        let z = if k <= REFINED_ZEROS {
            airy_zero(k, prec)?
        } else {
            airy_zero_asymptotic(k, prec)
        };
        out.push(z);
    }
    let mut guard = cache.lock().expect("zero cache poisoned");
    let slot = guard.entry(prec).or_default();
    if slot.len() < out.len() {
        *slot = out.clone();
    }
    Ok(out)
}

/// Zeros `a_k` (magnitudes) and `b_k = 2 a_k³/27`.
#[derive(Clone, Debug)]
pub struct AiryTables {
    pub zeros: Vec<Real>,
    pub b: Vec<Real>,
    pub prec: u32,
}

impl AiryTables {
    pub fn new(k_max: usize, prec: u32) -> Result<AiryTables> {
        let zeros: Vec<Real> = zeros(k_max, prec)?.into_iter().map(|z| z.with_prec(prec)).collect();
        let b = zeros.iter().map(|a| a.powi(3) * 2i64 / 27i64).collect();
        Ok(AiryTables { zeros, b, prec })
    }
}

// ---------------------------------------------------------------- U

fn check_u_args(a: &Real, b: &Real, z: &Real) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) || *z <= 0i64 {
        return Err(Error::Domain("U(a, b, z) needs finite a, b and z > 0".into()));
    }
    Ok(())
}

/// Tricomi's `U(a, b, z)` for `z > 0` at the precision of `z`.
///
/// Large `z` uses the asymptotic series `z^-a Σ (a)_n (a-b+1)_n/n! (-z)^-n`
/// when it reaches full precision; otherwise the Kummer connection formula
/// for non-integer `b`, and the integral representation with the
/// contiguous recurrence in `a` for integer `b`.
pub fn hypergeometric_u(a: &Real, b: &Real, z: &Real) -> Result<Real> {
    check_u_args(a, b, z)?;
    let prec = z.prec();
    if let Some(v) = u_asymptotic(a, b, z, prec) {
        return Ok(v);
    }
    if !b.is_integer() {
        return u_kummer(a, b, z, prec);
    }
    hypergeometric_u_recurrence(a, b, z)
}

fn u_asymptotic(a: &Real, b: &Real, z: &Real, prec: u32) -> Option<Real> {
    let w = prec + 16;
    let z = z.with_prec(w);
    let a = a.with_prec(w);
    let c = &a - b + 1i64;
    let eps = two_pow(w, -(w as i32));
    let mut term = Real::one(w);
    let mut sum = Real::one(w);
    for n in 0i64..100_000 {
        let next = -(&term * (&a + n) * (&c + n) / (&z * (n + 1)));
        if next.is_zero() {
            break;
        }
        if n > 0 && next.abs() > term.abs() {
            return None;
        }
        sum += &next;
        if next.abs() < &eps * sum.abs() {
            break;
        }
        term = next;
    }
    Some((sum * z.powf(&-a)).with_prec(prec))
}

// Σ (a)_n/(b)_n z^n/n! and Σ |terms|.
fn kummer_m(a: &Real, b: &Real, z: &Real, w: u32) -> Result<(Real, Real)> {
    let eps = two_pow(w, -(w as i32));
    let mut term = Real::one(w);
    let mut sum = Real::one(w);
    let mut mag = Real::one(w);
    let zf = z.to_f64();
    let size = zf + a.to_f64().abs() + b.to_f64().abs();
    for n in 0i64..1_000_000 {
        term = term * (a + n) * z / ((b + n) * (n + 1));
        if term.is_zero() {
            return Ok((sum, mag));
        }
        sum += &term;
        mag += term.abs();
        if (n as f64) > size && term.abs() < &eps * &mag {
            return Ok((sum, mag));
        }
    }
    Err(Error::Convergence("Kummer series".into()))
}

fn u_kummer(a: &Real, b: &Real, z: &Real, prec: u32) -> Result<Real> {
    // M grows like e^z while U stays near z^-a
    let mut guard = (z.to_f64() * LOG2_E).ceil() as u32 + 32;
    loop {
        let w = prec + guard;
        let (a, b, z) = (a.with_prec(w), b.with_prec(w), z.with_prec(w));
        let one_minus_b = Real::one(w) - &b;
        let a1 = &a + &one_minus_b;
        let (m1, mag1) = kummer_m(&a, &b, &z, w)?;
        let (m2, mag2) = kummer_m(&a1, &(Real::from_int(w, 2) - &b), &z, w)?;
        let c1 = gamma(&one_minus_b)? * rgamma(&a1)?;
        let c2 = gamma(&(&b - 1i64))? * rgamma(&a)? * z.powf(&one_minus_b);
        let t1 = &c1 * m1;
        let t2 = &c2 * m2;
        let value = &t1 + &t2;
        let size = (c1 * mag1).abs() + (c2 * mag2).abs();
        let lost = log2_abs(&size) - log2_abs(&value);
        if lost + 16.0 <= guard as f64 {
            return Ok(value.with_prec(prec));
        }
        if !lost.is_finite() || lost > 100_000.0 {
            return Err(Error::Convergence("U: connection formula cancels completely".into()));
        }
        guard = lost.ceil() as u32 + 48;
    }
}

/// `U(a, b, z) = Γ(a)^-1 ∫_0^∞ e^(-zt) t^(a-1) (1+t)^(b-a-1) dt`, `a > 0`.
pub fn hypergeometric_u_integral(a: &Real, b: &Real, z: &Real) -> Result<Real> {
    check_u_args(a, b, z)?;
    if *a <= 0i64 {
        return Err(Error::Domain("the integral representation needs a > 0".into()));
    }
    let prec = z.prec();
    let w = prec + 16;
    let (a, b, z) = (a.with_prec(w), b.with_prec(w), z.with_prec(w));
    let am1 = &a - 1i64;
    let bam1 = &b - &a - 1i64;
    let tol = 2f64.powi(-(prec.min(1000) as i32));
    let q = integrate_half_line(
        |t: &Real| Ok((-(&z * t)).exp() * t.powf(&am1) * (t + 1i64).powf(&bam1)),
        &Real::zero(w),
        tol,
    )?;
    Ok((q.value * rgamma(&a)?).with_prec(prec))
}

/// `U(a, b, z)` for any real `a`: the integral at `a + m` and `a + m + 1`
/// with `a + m > 0`, then `U(a-1) = (z + 2a - b) U(a) - a(a-b+1) U(a+1)`.
pub fn hypergeometric_u_recurrence(a: &Real, b: &Real, z: &Real) -> Result<Real> {
    check_u_args(a, b, z)?;
    let prec = z.prec();
    let m = if *a > 0i64 { 0 } else { (-a.to_f64()).floor() as i64 + 1 };
    let w = prec + 16 + 4 * m as u32;
    let (b, z) = (b.with_prec(w), z.with_prec(w));
    let top = a.with_prec(w) + m;
    let mut hi = hypergeometric_u_integral(&(&top + 1i64), &b, &z)?;
    let mut cur = hypergeometric_u_integral(&top, &b, &z)?;
    for j in 0..m {
        let ac = &top - j;
        let next = (&z + &ac * 2i64 - &b) * &cur - &ac * (&ac - &b + 1i64) * &hi;
        hi = cur;
        cur = next;
    }
    Ok(cur.with_prec(prec))
}

// ---------------------------------------------------------------- density

/// `f_Ai(x) = 2√6 x^(-10/3) Σ_k e^(-b_k/x²) b_k^(2/3) U(-5/6, 4/3, b_k/x²)`
/// at the precision of `x`. Terms are added until they fall below the
/// target relative to the largest one; `k_cap` bounds their number.
pub fn airy_density(x: &Real, k_cap: usize) -> Result<Real> {
    if !x.is_finite() || *x <= 0i64 {
        return Err(Error::Domain("the density needs x > 0".into()));
    }
    if k_cap == 0 {
        return Err(Error::InvalidArgument("need at least one term".into()));
    }
    let prec = x.prec();
    let xf = x.to_f64();
    // the terms are of size one while the sum is near e^(-6x²)
    let mut guard = (6.0 * xf * xf * LOG2_E).ceil() as u32 + 24;
    loop {
        if guard > 60_000 {
            return Err(Error::Convergence(format!("density at x = {xf}: precision cap")));
        }
        let w = round_prec(prec + guard);
        let (sum, max) = density_sum(&x.with_prec(w), k_cap, w)?;
        let lost = log2_abs(&max) - log2_abs(&sum);
        if lost + 16.0 <= guard as f64 {
            let x = x.with_prec(w);
            let pre = Real::from_int(w, 24).sqrt() / x.powf(&Real::from_rat(w, &Rat::from((10, 3))));
            return Ok((pre * sum).with_prec(prec));
        }
        if !lost.is_finite() {
            return Err(Error::Convergence(format!("density at x = {xf}: complete cancellation")));
        }
        guard = lost.ceil() as u32 + 32;
    }
}

fn density_sum(x: &Real, k_cap: usize, w: u32) -> Result<(Real, Real)> {
    let a = Real::from_rat(w, &Rat::from((-5, 6)));
    let b = Real::from_rat(w, &Rat::from((4, 3)));
    let two_thirds = Real::from_rat(w, &Rat::from((2, 3)));
    let x2 = x * x;
    let eps = two_pow(w, -(w as i32));
    let mut sum = Real::zero(w);
    let mut max = Real::zero(w);
    let mut table: Vec<Real> = Vec::new();
    let mut small = 0;
    for k in 1..=k_cap {
        if k > table.len() {
            table = zeros((2 * table.len()).clamp(16, k_cap), w)?;
        }
        let bk = table[k - 1].powi(3) * 2i64 / 27i64;
        let z = &bk / &x2;
        let term = (-z.clone()).exp() * bk.powf(&two_thirds) * hypergeometric_u(&a, &b, &z)?;
        max = max.max(term.abs());
        sum += &term;
        if z > 2i64 && term.abs() < &eps * &max {
            small += 1;
            if small >= 2 {
                return Ok((sum, max));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence(format!(
        "density at x = {}: more than {k_cap} terms needed",
        x.to_f64()
    )))
}

/// `E[e^(-λX)] = λ√(2π) Σ_k exp(-a_k λ^(2/3) 2^(-1/3))`, at the precision
/// of `λ`.
pub fn airy_laplace(lambda: &Real, k_cap: usize) -> Result<Real> {
    if !lambda.is_finite() || *lambda <= 0i64 {
        return Err(Error::Domain("the Laplace transform needs λ > 0".into()));
    }
    let prec = lambda.prec();
    let w = prec + 24;
    let l = lambda.with_prec(w);
    let c = l.powf(&Real::from_rat(w, &Rat::from((2, 3)))) / Real::from_int(w, 2).cbrt();
    let eps = two_pow(w, -(w as i32));
    let exact = zeros(REFINED_ZEROS.min(k_cap), w)?;
    let mut sum = Real::zero(w);
    for k in 1..=k_cap {
        let a = if k <= exact.len() {
            exact[k - 1].clone()
        } else {
            airy_zero_asymptotic(k, w)
        };
        let t = (-(&c * a)).exp();
        sum += &t;
        if t < &eps * &sum {
            let v = l * (Real::pi(w) * 2i64).sqrt() * sum;
            return Ok(v.with_prec(prec));
        }
    }
    Err(Error::Convergence(format!(
        "Laplace transform at λ = {}: more than {k_cap} terms needed",
        lambda.to_f64()
    )))
}

// ---------------------------------------------------------------- tables

/// `f_Ai` and its distribution function on a uniform grid over
/// `[0, x_max]`, in `f64`. The CDF is accumulated by Simpson's rule and
/// interpolated by cubic Hermite polynomials with the density as slope.
#[derive(Clone, Debug)]
pub struct AiryCdf {
    step: f64,
    density: Vec<f64>,
    cdf: Vec<f64>,
}

impl AiryCdf {
    pub fn new(x_max: f64, intervals: usize, prec: u32) -> Result<AiryCdf> {
        if !(x_max > 0.0) || intervals == 0 {
            return Err(Error::InvalidArgument("need x_max > 0 and intervals >= 1".into()));
        }
        let step = x_max / intervals as f64;
        let f = |x: f64| -> Result<f64> {
            // below 0.05 the density is under 1e-100
            if x < 0.05 {
                return Ok(0.0);
            }
            Ok(airy_density(&Real::from_f64(prec, x), DENSITY_TERM_CAP)?.to_f64())
        };
        let mut density = vec![f(0.0)?];
        let mut cdf = vec![0.0];
        for i in 0..intervals {
            let x0 = i as f64 * step;
            let mid = f(x0 + step / 2.0)?;
            let right = f(x0 + step)?;
            let last = *cdf.last().expect("nonempty");
            let left = *density.last().expect("nonempty");
            cdf.push(last + step / 6.0 * (left + 4.0 * mid + right));
            density.push(right);
        }
        Ok(AiryCdf { step, density, cdf })
    }

    pub fn x_max(&self) -> f64 {
        self.step * (self.cdf.len() - 1) as f64
    }

    /// `∫_0^x_max f_Ai`, which should be 1.
    pub fn mass(&self) -> f64 {
        *self.cdf.last().expect("nonempty")
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= self.x_max() {
            return 0.0;
        }
        let i = ((x / self.step) as usize).min(self.density.len() - 2);
        let t = x / self.step - i as f64;
        self.density[i] * (1.0 - t) + self.density[i + 1] * t
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.x_max() {
            return self.mass();
        }
        let h = self.step;
        let i = ((x / h) as usize).min(self.cdf.len() - 2);
        let t = x / h - i as f64;
        let (p0, p1) = (self.cdf[i], self.cdf[i + 1]);
        let (m0, m1) = (self.density[i] * h, self.density[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * m1
    }

    /// CDF of `scale · X`.
    pub fn scaled_cdf(&self, x: f64, scale: f64) -> f64 {
        self.cdf(x / scale)
    }
}

/// `∫_0^x_max x^s f_Ai(x) dx` by tanh-sinh quadrature; the tail beyond
/// `x_max = 6` is below `e^-200`.
pub fn airy_density_moment(s: u32, tol: f64, prec: u32) -> Result<Real> {
    let lo = Real::from_f64(prec, 0.0);
    let hi = Real::from_f64(prec, 6.0);
    let q = integrate(
        |x: &Real| {
            if *x < 0.05 {
                return Ok(Real::zero(prec));
            }
            Ok(airy_density(x, DENSITY_TERM_CAP)? * x.powi(s as i32))
        },
        &lo,
        &hi,
        tol,
    )?;
    Ok(q.value)
}

/// `x,density` lines for plotting.
pub fn density_csv(xs: &[f64], prec: u32) -> Result<String> {
    let mut out = String::from("x,density\n");
    for &x in xs {
        let v = if x <= 0.0 {
            0.0
        } else {
            airy_density(&Real::from_f64(prec, x), DENSITY_TERM_CAP)?.to_f64()
        };
        out.push_str(&format!("{x},{v:e}\n"));
    }
    Ok(out)
}

/// `lambda,laplace` lines for plotting.
pub fn laplace_csv(lambdas: &[f64], prec: u32) -> Result<String> {
    let mut out = String::from("lambda,laplace\n");
    for &l in lambdas {
        let v = airy_laplace(&Real::from_f64(prec, l), LAPLACE_TERM_CAP)?.to_f64();
        out.push_str(&format!("{l},{v:e}\n"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64, prec: u32) -> Real {
        Real::from_f64(prec, v)
    }

    #[test]
    fn ai_reference_values() {
        // Ai(0) = 0.355028053887817239, Ai(1) = 0.135292416312881416,
        // Ai(-1) = 0.535560883292352580
        let cases = [(0.0, 0.355_028_053_887_817_2), (1.0, 0.135_292_416_312_881_4), (-1.0, 0.535_560_883_292_352_6)];
        for (x, want) in cases {
            let v = airy_ai(&r(x, 128)).unwrap().to_f64();
            assert!((v - want).abs() < 1e-15, "Ai({x}) = {v}");
        }
    }

    #[test]
    fn ai_seam_agreement() {
        for prec in [64u32, 128, 256] {
            // crossover for negative arguments
            let mut x = 1.0f64;
            while !use_asymptotic(x, prec) {
                x += 0.01;
            }
            let a = ai_maclaurin(&r(-x, prec), prec).unwrap();
            let b = ai_asymptotic_neg(&r(x, prec), prec).unwrap();
            let bits = -log2_abs(&(&a - &b)) + log2_abs(&a);
            assert!(bits >= prec as f64 / 2.0, "prec {prec}: {bits} bits at {x}");
        }
    }

    #[test]
    fn zeros() {
        let a1 = airy_zero(1, 128).unwrap();
        assert!((a1.to_f64() - 2.338_107_410_459_767).abs() < 1e-14);
        let a2 = airy_zero(2, 128).unwrap();
        assert!((a2.to_f64() - 4.087_949_444_130_970).abs() < 1e-14);
        let t = AiryTables::new(20, 128).unwrap();
        for k in 0..20 {
            if k > 0 {
                assert!(t.zeros[k] > t.zeros[k - 1]);
            }
            let v = airy_ai(&-t.zeros[k].clone()).unwrap();
            assert!(v.abs() < 1e-32, "k = {}", k + 1);
            // sign change around the zero
            let d = r(1e-6, 128);
            let lo = airy_ai(&-(&t.zeros[k] - &d)).unwrap();
            let hi = airy_ai(&-(&t.zeros[k] + &d)).unwrap();
            assert!(lo.to_f64() * hi.to_f64() < 0.0);
        }
        assert!((t.b[0].to_f64() - 2.0 * 2.338_107_410_459_767f64.powi(3) / 27.0).abs() < 1e-13);
    }

    #[test]
    fn u_routes_agree() {
        let prec = 96;
        let a = Real::from_rat(prec, &Rat::from((-5, 6)));
        let b = Real::from_rat(prec, &Rat::from((4, 3)));
        for z in [0.05, 0.5, 2.0, 10.0, 40.0] {
            let z = r(z, prec);
            let k = hypergeometric_u(&a, &b, &z).unwrap();
            let q = hypergeometric_u_recurrence(&a, &b, &z).unwrap();
            assert!((&k - &q).abs() < 1e-20 * k.abs().to_f64().max(1.0), "z = {}", z.to_f64());
            // U(-5/6) = (z-1) U(1/6) + U(7/6)/36
            let u1 = hypergeometric_u(&(&a + 1i64), &b, &z).unwrap();
            let u2 = hypergeometric_u(&(&a + 2i64), &b, &z).unwrap();
            let rhs = (&z - 1i64) * u1 + u2 / 36i64;
            assert!((&k - &rhs).abs() < 1e-22 * k.abs().to_f64().max(1.0));
        }
        for z in [1e3, 1e4] {
            let z = r(z, prec);
            let u = hypergeometric_u(&a, &b, &z).unwrap();
            let ratio = (u / z.powf(&-a.clone())).to_f64();
            assert!((ratio - 1.0).abs() < 2.0 / z.to_f64(), "{ratio}");
        }
    }

    #[test]
    fn density_shape() {
        assert!(airy_density(&r(0.2, 64), DENSITY_TERM_CAP).unwrap() < 1e-6);
        assert!(airy_density(&r(0.0, 64), DENSITY_TERM_CAP).is_err());
        // log f(x)/x² → -6: least-squares slope against x² on [2, 4]
        let pts: Vec<(f64, f64)> = (0..=8)
            .map(|i| {
                let x = 2.0 + 0.25 * i as f64;
                let f = airy_density(&r(x, 64), DENSITY_TERM_CAP).unwrap();
                (x * x, f.ln().to_f64())
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((slope + 6.0).abs() < 0.6, "slope {slope}");
    }

    #[test]
    fn laplace_small_lambda_and_monotone() {
        let v = airy_laplace(&r(1e-3, 64), LAPLACE_TERM_CAP).unwrap().to_f64();
        assert!((v - 1.0).abs() < 1e-2, "{v}");
        let mut prev = 1.0;
        for l in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = airy_laplace(&r(l, 64), LAPLACE_TERM_CAP).unwrap().to_f64();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }
}
