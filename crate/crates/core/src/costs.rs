//! Slice cost families `ω_p` and their non-universal constants `α(ω_p)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{
    fit_limit, gamma_rat, gamma_ratio_rat, normalized_catalan, rgamma_rat, Constants, Number, Rat,
    Real, Scalar,
};

/// The families of slice costs.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `Γ(k+p+a)/Γ(k+a)`, `a > 0`.
    GammaRatio { a: Rat },
    /// `Γ(k+p+a-3/2)Γ(k+2) / (Γ(k+a)Γ(k+1/2))`.
    GammaRatio32 { a: Rat },
    /// `(k+1/2)^p`.
    PowerHalf,
    /// `(k+1)^p`.
    PowerOne,
    /// `k^p`, with `ω(0) = 0`.
    PurePower,
    /// `ln(k+1)`; the exponent is ignored.
    LogShift,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::GammaRatio { .. } => "gamma-ratio",
            Family::GammaRatio32 { .. } => "gamma-ratio-32",
            Family::PowerHalf => "power-half",
            Family::PowerOne => "power-one",
            Family::PurePower => "pure-power",
            Family::LogShift => "log-shift",
        }
    }

    /// All family names accepted by [`Family::from_name`].
    pub const NAMES: [&'static str; 6] = [
        "gamma-ratio",
        "gamma-ratio-32",
        "power-half",
        "power-one",
        "pure-power",
        "log-shift",
    ];

    /// Builds a family from its name; `a` is required by the gamma-ratio
    /// families and ignored otherwise.
    pub fn from_name(name: &str, a: Option<Rat>) -> Result<Family> {
        let need_a = || {
            a.clone().ok_or_else(|| {
                Error::InvalidArgument(format!("cost family `{name}` needs the parameter a"))
            })
        };
        Ok(match name {
            "gamma-ratio" => Family::GammaRatio { a: need_a()? },
            "gamma-ratio-32" => Family::GammaRatio32 { a: need_a()? },
            "power-half" => Family::PowerHalf,
            "power-one" => Family::PowerOne,
            "pure-power" => Family::PurePower,
            "log-shift" => Family::LogShift,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown cost family `{name}`; expected one of {}",
                    Family::NAMES.join(", ")
                )))
            }
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::from_name(s, None)
    }
}

/// A cost function `ω_p` together with its family parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CostFunction {
    family: Family,
    p: Rat,
}

/// How an `α` value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMethod {
    ClosedForm,
    RegularizedSeries,
}

impl fmt::Display for AlphaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaMethod::ClosedForm => "closed_form",
            AlphaMethod::RegularizedSeries => "regularized_series",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AlphaResult {
    pub value: Real,
    pub method: AlphaMethod,
    pub estimated_error: Real,
}

fn half() -> Rat {
    Rat::from((1, 2))
}

fn is_integer(r: &Rat) -> bool {
    *r.denom() == 1
}

impl CostFunction {
    /// Validates parameters: `p >= 0`, `a > 0` for gamma ratios, and
    /// `p + a > 3/2` for the shifted ratio so every value is positive.
    pub fn new(family: Family, p: Rat) -> Result<CostFunction> {
        if p < 0 {
            return Err(Error::InvalidArgument(format!("p must be >= 0, got {p}")));
        }
        match &family {
            Family::GammaRatio { a } if *a <= 0 => {
                return Err(Error::InvalidArgument(format!(
                    "gamma-ratio needs a > 0, got {a}"
                )))
            }
            Family::GammaRatio32 { a } if Rat::from(a + &p) <= Rat::from((3, 2)) => {
                return Err(Error::InvalidArgument(format!(
                    "gamma-ratio-32 needs a + p > 3/2, got a = {a}, p = {p}"
                )))
            }
            _ => {}
        }
        let p = if family == Family::LogShift { Rat::new() } else { p };
        Ok(CostFunction { family, p })
    }

    pub fn gamma_ratio(a: Rat, p: Rat) -> Result<CostFunction> {
        CostFunction::new(Family::GammaRatio { a }, p)
    }

    pub fn gamma_ratio_32(a: Rat, p: Rat) -> Result<CostFunction> {
        CostFunction::new(Family::GammaRatio32 { a }, p)
    }

    pub fn power_half(p: Rat) -> Result<CostFunction> {
        CostFunction::new(Family::PowerHalf, p)
    }

    pub fn power_one(p: Rat) -> Result<CostFunction> {
        CostFunction::new(Family::PowerOne, p)
    }

    pub fn pure_power(p: Rat) -> Result<CostFunction> {
        CostFunction::new(Family::PurePower, p)
    }

    pub fn log_shift() -> CostFunction {
        CostFunction {
            family: Family::LogShift,
            p: Rat::new(),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    /// Same family at a different exponent.
    pub fn with_p(&self, p: Rat) -> Result<CostFunction> {
        CostFunction::new(self.family.clone(), p)
    }

    /// Short identifier such as `gamma-ratio(a=1/2,p=3/4)`.
    pub fn id(&self) -> String {
        match &self.family {
            Family::GammaRatio { a } | Family::GammaRatio32 { a } => {
                format!("{}(a={},p={})", self.family.name(), a, self.p)
            }
            Family::LogShift => "log-shift".to_string(),
            f => format!("{}(p={})", f.name(), self.p),
        }
    }

    /// Correction exponent `η` in `ω(k) = k^p (1 + O(k^-η))`, read off the
    /// first term of the large-`k` expansion; infinite when `ω(k) = k^p`.
    pub fn eta(&self) -> f64 {
        let p = &self.p;
        // Γ(k+x)/Γ(k+y) = k^(x-y) (1 + (x-y)(x+y-1)/(2k) + ...)
        let first = |x: Rat, y: Rat| -> Rat {
            let d = Rat::from(&x - &y);
            let s = Rat::from(&x + &y) - 1u32;
            d * s / 2u32
        };
        let leading = match &self.family {
            Family::GammaRatio { a } => {
                if *p == 0 {
                    return f64::INFINITY;
                }
                first(Rat::from(p + a), a.clone())
            }
            Family::GammaRatio32 { a } => {
                let x = Rat::from(p + a) - Rat::from((3, 2));
                first(x, a.clone()) + first(Rat::from(2), half())
            }
            Family::PowerHalf | Family::PowerOne => {
                if *p == 0 {
                    return f64::INFINITY;
                }
                Rat::from(1)
            }
            Family::PurePower => return f64::INFINITY,
            Family::LogShift => Rat::from(1),
        };
        if leading == 0 {
            2.0
        } else {
            1.0
        }
    }

    /// `ω(k)`, exact whenever the value is rational.
    pub fn evaluate(&self, k: u64, prec: u32) -> Result<Number> {
        let kr = Rat::from(k);
        let p = &self.p;
        match &self.family {
            Family::GammaRatio { a } => {
                gamma_ratio_rat(&(Rat::from(&kr + p) + a), &Rat::from(&kr + a), prec)
            }
            Family::GammaRatio32 { a } => {
                let top = Rat::from(&kr + p) + a - Rat::from((3, 2));
                let k2 = Rat::from(&kr + 2u32);
                let kh = Rat::from(&kr + half());
                let ka = Rat::from(&kr + a);
                let r1 = gamma_ratio_rat(&top, &kh, prec + 16)?;
                let r2 = gamma_ratio_rat(&k2, &ka, prec + 16)?;
                if let (Number::Exact(u), Number::Exact(v)) = (&r1, &r2) {
                    return Ok(Number::Exact(Rat::from(u * v)));
                }
                let v = r1.to_real(prec + 16) * r2.to_real(prec + 16);
                Ok(Number::Approx(v.with_prec(prec)))
            }
            Family::PowerHalf => Ok(power(&(kr + half()), p, prec)),
            Family::PowerOne => Ok(power(&(kr + 1u32), p, prec)),
            Family::PurePower => {
                if k == 0 {
                    Ok(Number::Exact(Rat::new()))
                } else {
                    Ok(power(&kr, p, prec))
                }
            }
            Family::LogShift => {
                if k == 0 {
                    Ok(Number::Exact(Rat::new()))
                } else {
                    Ok(Number::Approx(Real::from_int(prec, k as i64 + 1).ln()))
                }
            }
        }
    }

    /// True when every `ω(k)` is rational, so exact arithmetic is possible.
    pub fn is_rational(&self) -> bool {
        let p_int = is_integer(&self.p);
        match &self.family {
            Family::GammaRatio { .. } => p_int,
            Family::GammaRatio32 { a } => p_int && is_integer(a),
            Family::PowerHalf | Family::PowerOne | Family::PurePower => p_int,
            Family::LogShift => false,
        }
    }

    /// `ω(0), ..., ω(n_max)` as scalars of kind `S`.
    ///
    /// Real tables use the ratio recurrences of the gamma families (with
    /// guard bits), which is much cheaper than independent evaluations.
    pub fn table<S: Scalar>(&self, n_max: usize, ctx: S::Ctx, prec: u32) -> Result<Vec<S>> {
        let w = prec + 32;
        let mut out = Vec::with_capacity(n_max + 1);
        match &self.family {
            Family::GammaRatio { a } if !is_integer(&self.p) => {
                let mut cur = self.evaluate(0, w)?.to_real(w);
                let pa = Real::from_rat(w, &Rat::from(&self.p + a));
                let ar = Real::from_rat(w, a);
                for k in 0..=n_max {
                    out.push(S::from_number(ctx, &Number::Approx(cur.with_prec(prec)))?);
                    cur = cur * (&pa + k as i64) / (&ar + k as i64);
                }
            }
            Family::GammaRatio32 { a } if !self.is_rational() => {
                let mut cur = self.evaluate(0, w)?.to_real(w);
                let top = Real::from_rat(w, &(Rat::from(&self.p + a) - Rat::from((3, 2))));
                let ar = Real::from_rat(w, a);
                let h = Real::from_f64(w, 0.5);
                for k in 0..=n_max {
                    out.push(S::from_number(ctx, &Number::Approx(cur.with_prec(prec)))?);
                    let k = k as i64;
                    cur = cur * (&top + k) * (k + 2) / ((&ar + k) * (&h + k));
                }
            }
            _ => {
                for k in 0..=n_max {
                    out.push(S::from_number(ctx, &self.evaluate(k as u64, prec)?)?);
                }
            }
        }
        Ok(out)
    }

    /// Closed form of `α(ω_p)` for the gamma-ratio families.
    pub fn alpha_closed_form(&self, prec: u32) -> Result<AlphaResult> {
        let p = &self.p;
        if *p == half() {
            return Err(Error::Pole("α(ω_p) has a pole at p = 1/2".into()));
        }
        let w = prec + 32;
        let c = Constants::get(w);
        let g = |x: Rat| gamma_rat(&x, w);
        let rg = |x: Rat| rgamma_rat(&x, w);
        let value = match &self.family {
            Family::GammaRatio { a } if *a == half() => {
                // -Γ(p-1/2)/(2√π)
                -g(Rat::from(p - half()))? / (&c.sqrt_pi * 2i64)
            }
            Family::GammaRatio { a } => {
                // Γ(a+p-1) [1/Γ(a-1) - Γ(1/2-p)/(Γ(a-1/2)Γ(-p))]
                let pole_free = rg(Rat::from(-p))?.is_zero();
                let second = if pole_free {
                    Real::zero(w)
                } else {
                    g(half() - p)? * rg(Rat::from(a - half()))? * rg(Rat::from(-p))?
                };
                let bracket = rg(Rat::from(a - 1u32))? - second;
                let lead = Rat::from(a + p) - 1u32;
                if bracket.is_zero() {
                    bracket
                } else {
                    g(lead)? * bracket
                }
            }
            Family::GammaRatio32 { a } => {
                // Γ(a+p-3/2) / (Γ(1/2) Γ(a-1) (1-2p))
                let top = Rat::from(a + p) - Rat::from((3, 2));
                let one_minus = Real::from_rat(w, &(Rat::from(1) - Rat::from(p * 2u32)));
                g(top)? * rg(Rat::from(a - 1u32))? / (&c.sqrt_pi * one_minus)
            }
            _ => return Err(Error::NoClosedForm(self.family.name().to_string())),
        };
        Ok(AlphaResult {
            value: value.with_prec(prec),
            method: AlphaMethod::ClosedForm,
            estimated_error: Real::zero(prec),
        })
    }

    /// `α(ω_p)` as the constant term of the partial sums of `Σ c_N ω(N)`.
    ///
    /// The partial sums behave like `α + Σ_j g_j M^(p-1/2-j)` (with extra
    /// `ln M` terms for the logarithmic family), so fitting that ansatz at
    /// geometrically spaced cut-offs isolates `α`. This is the same constant
    /// as the regular part of the generating function at `z = 1`. Where
    /// `p - 1/2` is an integer the ansatz degenerates; there the value is
    /// obtained by continuation in `p` from symmetric neighbours.
    pub fn alpha_numeric(&self, tol: f64, prec: u32) -> Result<AlphaResult> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        if self.family != Family::LogShift {
            if self.p == half() {
                return Err(Error::HalfPoint);
            }
            if is_integer(&Rat::from(&self.p - half())) {
                return self.alpha_by_continuation(tol, prec);
            }
        }
        let mut last = None;
        for scale in [14u32, 16] {
            let r = self.alpha_fit(prec, scale)?;
            let bound = tol * r.value.abs().to_f64().max(1.0);
            if r.estimated_error.to_f64() <= bound {
                return Ok(r);
            }
            last = Some(r);
        }
        let r = last.expect("at least one attempt");
        Err(Error::Convergence(format!(
            "α estimate {} has error {:e} above tolerance {tol:e}",
            r.value.to_sci_string(16),
            r.estimated_error.to_f64()
        )))
    }

    fn alpha_fit(&self, prec: u32, log2_max: u32) -> Result<AlphaResult> {
        let w = prec + 64;
        let unknowns = 13usize;
        // Cut-offs 2^(log2_max - 6), ..., 2^log2_max in steps of √2.
        let nodes: Vec<usize> = (0..unknowns)
            .map(|i| {
                let e = log2_max as f64 - 6.0 + 0.5 * i as f64;
                2f64.powf(e).round() as usize
            })
            .collect();
        let n_max = *nodes.last().expect("nodes");
        let omega: Vec<Real> = self.table::<Real>(n_max, w, w)?;

        let mut c = Real::from_rat(w, &normalized_catalan(0));
        let mut partial = Real::zero(w);
        let mut sums = Vec::with_capacity(unknowns);
        let mut next = 0;
        for n in 0..=n_max {
            partial.add_mul(&c, &omega[n]);
            if n == nodes[next] {
                sums.push(partial.clone());
                next += 1;
            }
            // c_{n+1} = c_n (2n+1) / (2n+4)
            c = c * (2 * n as i64 + 1) / (2 * n as i64 + 4);
        }

        let rows: Vec<Vec<Real>> = nodes
            .iter()
            .map(|&m| {
                let mr = Real::from_int(w, m as i64);
                let mut row = vec![Real::one(w)];
                if self.family == Family::LogShift {
                    let lm = mr.ln();
                    let mut j = 0i64;
                    while row.len() < unknowns {
                        let e = Real::from_rat(w, &Rat::from((-1 - 2 * j, 2)));
                        let t = mr.powf(&e);
                        row.push(&t * &lm);
                        if row.len() < unknowns {
                            row.push(t);
                        }
                        j += 1;
                    }
                } else {
                    let base = Rat::from(&self.p - half());
                    for j in 0..unknowns - 1 {
                        let e = Real::from_rat(w, &Rat::from(&base - j as u32));
                        row.push(mr.powf(&e));
                    }
                }
                row
            })
            .collect();
        let fit = fit_limit(&rows, &sums)?;
        Ok(AlphaResult {
            value: fit.limit.with_prec(prec),
            method: AlphaMethod::RegularizedSeries,
            estimated_error: fit.error.with_prec(prec),
        })
    }

    /// Symmetric continuation in `p` around a half-odd exponent.
    fn alpha_by_continuation(&self, tol: f64, prec: u32) -> Result<AlphaResult> {
        let w = prec + 32;
        let steps: Vec<Rat> = [16u32, 8, 4, 2, 1].iter().map(|&n| Rat::from((n, 100))).collect();
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for h in &steps {
            let up = self.with_p(Rat::from(&self.p + h))?.alpha_fit(w, 14)?;
            let down = self.with_p(Rat::from(&self.p - h))?.alpha_fit(w, 14)?;
            let hr = Real::from_rat(w, h);
            even.push((&up.value + &down.value) / 2i64);
            odd.push((&up.value - &down.value) * &hr / 2i64);
        }
        let rows: Vec<Vec<Real>> = steps
            .iter()
            .map(|h| {
                let h2 = Real::from_rat(w, &Rat::from(h * h));
                vec![Real::one(w), h2.clone(), &h2 * &h2, h2.powi(3), h2.powi(4)]
            })
            .collect();
        let value = fit_limit(&rows, &even)?;
        let residue = fit_limit(&rows, &odd)?;
        let scale = value.limit.abs().to_f64().max(1.0);
        if residue.limit.abs().to_f64() > (tol * scale).max(1e3 * residue.error.to_f64()) {
            return Err(Error::Pole(format!(
                "α(ω_p) has a pole at p = {} with residue ≈ {}",
                self.p,
                residue.limit.to_sci_string(10)
            )));
        }
        Ok(AlphaResult {
            value: value.limit.with_prec(prec),
            method: AlphaMethod::RegularizedSeries,
            estimated_error: value.error.with_prec(prec),
        })
    }

    /// Closed form when one exists, otherwise the regularized series.
    pub fn alpha(&self, tol: f64, prec: u32) -> Result<AlphaResult> {
        match self.alpha_closed_form(prec) {
            Err(Error::NoClosedForm(_)) => self.alpha_numeric(tol, prec),
            other => other,
        }
    }
}

fn power(base: &Rat, p: &Rat, prec: u32) -> Number {
    if is_integer(p) {
        if let Some(e) = p.numer().to_u32() {
            return Number::Exact(Rat::from(rug::ops::Pow::pow(base, e)));
        }
    }
    let b = Real::from_rat(prec + 16, base);
    let e = Real::from_rat(prec + 16, p);
    Number::Approx(b.powf(&e).with_prec(prec))
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}
