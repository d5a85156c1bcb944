//! The μ-recursions, rescaled and shifted moments, and the Takács case.
//!
//! Parameters are exact rationals. When every Γ-ratio entering a recursion
//! is rational (integer `p`), the recursion runs in exact arithmetic and
//! the results come back as [`Number::Exact`].

mod bounds;
mod limit_half;
mod log_case;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{factorial, gamma_ratio_rat, Number, Rat, Real, Scalar};

pub use bounds::{
    bound_constants, bound_constants_bridge_safe, bound_margins, carleman_fit, verify_bounds,
    BoundConstants, BoundReport, CarlemanFit,
};
pub use limit_half::{limit_half_moments, LimitHalfValue, DEFAULT_DELTAS};
pub use log_case::{
    gaussian_log_moments, tau_log, tau_log_coefficients, tau_log_convolution,
};

/// Which family of lattice paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ensemble {
    Excursion,
    Bridge,
}

impl Ensemble {
    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Excursion => "excursion",
            Ensemble::Bridge => "bridge",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ensemble> {
        match s {
            "excursion" | "e" => Ok(Ensemble::Excursion),
            "bridge" | "b" => Ok(Ensemble::Bridge),
            _ => Err(Error::InvalidArgument(format!(
                "unknown ensemble `{s}`; expected excursion or bridge"
            ))),
        }
    }
}

fn half() -> Rat {
    Rat::from((1, 2))
}

pub(crate) fn check_p(p: &Rat) -> Result<()> {
    if *p <= 0 {
        return Err(Error::InvalidArgument(format!("p must be > 0, got {p}")));
    }
    if *p == half() {
        return Err(Error::HalfPoint);
    }
    Ok(())
}

/// Runs `f` in exact arithmetic and falls back to reals when some input is
/// irrational.
fn exact_or_real<F, G>(exact: F, real: G) -> Result<Vec<Number>>
where
    F: FnOnce() -> Result<Vec<Rat>>,
    G: FnOnce() -> Result<Vec<Real>>,
{
    match exact() {
        Ok(v) => Ok(v.into_iter().map(Number::Exact).collect()),
        Err(Error::NotRational(_)) => Ok(real()?.into_iter().map(Number::Approx).collect()),
        Err(e) => Err(e),
    }
}

fn mu_excursion_in<S: Scalar>(p: &Rat, s_max: usize, ctx: S::Ctx, prec: u32) -> Result<Vec<S>> {
    check_p(p)?;
    let mut mu = vec![S::from_rat(ctx, &Rat::from((-1, 2)))];
    if s_max == 0 {
        return Ok(mu);
    }
    // μ_1 = Γ(p-1/2) / (8 Γ(1/2))
    let g = gamma_ratio_rat(&Rat::from(p - half()), &half(), prec)?;
    mu.push(S::from_number(ctx, &g)?.div_i64(8));
    let q = Rat::from(p + half());
    for s in 2..=s_max {
        let x = Rat::from(&q * s as u32) - 1u32;
        let y = Rat::from(&x - p);
        let coef = S::from_number(ctx, &gamma_ratio_rat(&x, &y, prec)?)?.div_i64(2);
        let mut v = mu[s - 1].mul(&coef);
        for k in 1..s {
            v.add_mul(&mu[k], &mu[s - k]);
        }
        mu.push(v);
    }
    Ok(mu)
}

fn mu_bridge_from<S: Scalar>(mu_e: &[S]) -> Vec<S> {
    let ctx = mu_e[0].ctx();
    let mut mu = vec![S::one(ctx)];
    for s in 1..mu_e.len() {
        let mut v = S::zero(ctx);
        for k in 0..s {
            v.add_mul(&mu[k], &mu_e[s - k]);
        }
        mu.push(v.mul_i64(2));
    }
    mu
}

/// `μ^(E)_0 .. μ^(E)_{s_max}`.
pub fn mu_excursion(p: &Rat, s_max: usize, prec: u32) -> Result<Vec<Number>> {
    exact_or_real(
        || mu_excursion_in::<Rat>(p, s_max, (), prec),
        || mu_excursion_in::<Real>(p, s_max, prec, prec),
    )
}

/// `μ^(B)_0 .. μ^(B)_{s_max}`.
pub fn mu_bridge(p: &Rat, s_max: usize, prec: u32) -> Result<Vec<Number>> {
    exact_or_real(
        || mu_excursion_in::<Rat>(p, s_max, (), prec).map(|m| mu_bridge_from(&m)),
        || mu_excursion_in::<Real>(p, s_max, prec, prec).map(|m| mu_bridge_from(&m)),
    )
}

/// `μ_s` of either ensemble.
pub fn mu(ensemble: Ensemble, p: &Rat, s_max: usize, prec: u32) -> Result<Vec<Number>> {
    match ensemble {
        Ensemble::Excursion => mu_excursion(p, s_max, prec),
        Ensemble::Bridge => mu_bridge(p, s_max, prec),
    }
}

fn mul_numbers(a: &Number, b: &Number, prec: u32) -> Number {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => Number::Exact(Rat::from(x * y)),
        _ => Number::Approx(a.to_real(prec) * b.to_real(prec)),
    }
}

/// Prefactor turning `μ_s` into the rescaled moment `M̄_s`:
/// `4√π s!/Γ((p+1/2)s - 1/2)` for excursions, `√π s!/Γ((p+1/2)s + 1/2)`
/// for bridges.
pub fn rescale_factor(ensemble: Ensemble, p: &Rat, s: usize, prec: u32) -> Result<Number> {
    let q = Rat::from(p + half()) * s as u32;
    let (arg, lead) = match ensemble {
        Ensemble::Excursion => (q - half(), 4u32),
        Ensemble::Bridge => (q + half(), 1u32),
    };
    let ratio = gamma_ratio_rat(&half(), &arg, prec)?;
    let f = Rat::from(factorial(s as u32) * lead);
    Ok(mul_numbers(&Number::Exact(f), &ratio, prec))
}

/// Rescaled moments `M̄_0 .. M̄_{s_max}`.
pub fn rescaled_moments(ensemble: Ensemble, p: &Rat, s_max: usize, prec: u32) -> Result<Vec<Number>> {
    let mu = mu(ensemble, p, s_max, prec)?;
    rescale(ensemble, p, &mu, prec)
}

fn rescale(ensemble: Ensemble, p: &Rat, mu: &[Number], prec: u32) -> Result<Vec<Number>> {
    mu.iter()
        .enumerate()
        .map(|(s, m)| Ok(mul_numbers(&rescale_factor(ensemble, p, s, prec)?, m, prec)))
        .collect()
}

/// Canonical shift `t(p) = Γ(p-1/2)/(2Γ(p))`.
pub fn canonical_shift(p: &Rat, prec: u32) -> Result<Number> {
    check_p(p)?;
    let r = gamma_ratio_rat(&Rat::from(p - half()), p, prec)?;
    Ok(mul_numbers(&r, &Number::Exact(half()), prec))
}

/// `⟨(x - t)^s⟩ = Σ_j C(s,j) (-t)^(s-j) M̄_j`.
pub fn shifted_moments(rescaled: &[Real], t: &Real) -> Vec<Real> {
    shifted_with_condition(rescaled, t).0
}

/// Shifted moments plus the number of bits lost to cancellation.
fn shifted_with_condition(rescaled: &[Real], t: &Real) -> (Vec<Real>, u32) {
    let prec = t.prec();
    let neg_t = -t;
    let mut out = Vec::with_capacity(rescaled.len());
    let mut lost = 0u32;
    for s in 0..rescaled.len() {
        let mut acc = Real::zero(prec);
        let mut mag = Real::zero(prec);
        let mut binom = Real::one(prec);
        for j in (0..=s).rev() {
            // term C(s,j) (-t)^(s-j) M̄_j, walking j downward
            let k = s - j;
            let term = &binom * neg_t.powi(k as i32) * &rescaled[j];
            mag += term.abs();
            acc += term;
            binom = binom * (s - k) as i64 / (k + 1) as i64;
        }
        if let (Some(a), Some(b)) = (mag.exponent(), acc.exponent()) {
            lost = lost.max((a - b).max(0) as u32);
        }
        out.push(acc);
    }
    (out, lost)
}

/// Everything known about one ensemble at one exponent.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub ensemble: Ensemble,
    pub p: Rat,
    pub s_max: usize,
    pub mu: Vec<Number>,
    pub rescaled: Vec<Number>,
    pub shift_t: Number,
    pub shifted: Vec<Real>,
}

impl MomentTable {
    /// Builds the table; the shifted moments are recomputed at higher
    /// precision until the binomial transform has lost no more than the
    /// guard bits.
    pub fn new(ensemble: Ensemble, p: &Rat, s_max: usize, prec: u32) -> Result<MomentTable> {
        check_p(p)?;
        let mut guard = 32u32;
        loop {
            let w = prec + guard;
            let mu = mu(ensemble, p, s_max, w)?;
            let rescaled = rescale(ensemble, p, &mu, w)?;
            let t = canonical_shift(p, w)?;
            let reals: Vec<Real> = rescaled.iter().map(|m| m.to_real(w)).collect();
            let (shifted, lost) = shifted_with_condition(&reals, &t.to_real(w));
            if lost + 8 <= guard {
                let round = |n: Number| match n {
                    Number::Approx(x) => Number::Approx(x.with_prec(prec)),
                    e => e,
                };
                return Ok(MomentTable {
                    ensemble,
                    p: p.clone(),
                    s_max,
                    mu: mu.into_iter().map(round).collect(),
                    rescaled: rescaled.into_iter().map(round).collect(),
                    shift_t: round(t),
                    shifted: shifted.into_iter().map(|x| x.with_prec(prec)).collect(),
                });
            }
            guard = lost + 40;
        }
    }
}

/// Takács coefficients `K_0 .. K_{s_max}`.
pub fn takacs_k(s_max: usize) -> Vec<Rat> {
    let mut k = vec![Rat::from((-1, 2))];
    for s in 1..=s_max {
        let mut v = Rat::from(&k[s - 1] * Rat::from((3 * s as i64 - 4, 4)));
        for j in 1..s {
            v += Rat::from(&k[j] * &k[s - j]);
        }
        k.push(v);
    }
    k
}

/// Moments of the area under a standard Brownian excursion,
/// `√π 2^((4-s)/2) s!/Γ((3s-1)/2) K_s`.
pub fn airy_moment(s: usize, prec: u32) -> Result<Real> {
    let w = prec + 16;
    let k = &takacs_k(s)[s];
    let ratio = gamma_ratio_rat(&half(), &Rat::from((3 * s as i64 - 1, 2)), w)?.to_real(w);
    let two_pow = Real::from_int(w, 2).powf(&Real::from_rat(w, &Rat::from((4 - s as i64, 2))));
    let v = two_pow * Real::from_integer(w, &factorial(s as u32)) * ratio * Real::from_rat(w, k);
    Ok(v.with_prec(prec))
}
