//! Explicit growth bounds for μ_s and a Carleman-type growth fit.

use super::{check_p, mu_bridge, mu_excursion, rescaled_moments, Ensemble};
use crate::error::{Error, Result};
use crate::numerics::{catalan, gamma_ratio_rat, rgamma_rat, solve_linear, Rat, Real};

#[derive(Clone, Debug)]
pub struct BoundConstants {
    pub f_p: Real,
    pub a_p: Real,
    pub r_p: Real,
}

impl BoundConstants {
    /// `RA ≥ f`, `1/(4A) + R ≤ 1` and `R ≥ 1/2`, with a relative slack of
    /// a few ulps for the rounded arithmetic.
    pub fn conditions_hold(&self) -> bool {
        let prec = self.f_p.prec();
        let slack = Real::from_int(prec, 2).powi(-(prec as i32) + 8);
        let one = Real::one(prec);
        let ra = &self.r_p * &self.a_p;
        let lhs = (&self.a_p * 4i64).recip() + &self.r_p;
        ra >= &self.f_p * (&one - &slack)
            && lhs <= &one + &slack
            && self.r_p >= Real::from_f64(prec, 0.5) * (&one - &slack)
            && self.a_p > 0i64
            && self.r_p > 0i64
    }

    /// The bridge induction closes only when `2R ≤ 1`.
    pub fn bridge_induction_holds(&self) -> bool {
        &self.r_p * 2i64 <= 1i64
    }
}

/// `f(p) = |Γ(p-1/2)|/(8√π Γ(p+1))` and the choice of `(A_p, R_p)`.
pub fn bound_constants(p: &Rat, prec: u32) -> Result<BoundConstants> {
    check_p(p)?;
    let half = Rat::from((1, 2));
    let g = gamma_ratio_rat(&Rat::from(p - &half), &half, prec)?.to_real(prec);
    let f = (g * rgamma_rat(&Rat::from(p + 1u32), prec)?).abs() / 8i64;
    let quarter = Real::from_f64(prec, 0.25);
    let (a, r) = if f <= quarter {
        (Real::from_f64(prec, 0.5), Real::from_f64(prec, 0.5))
    } else {
        let four_f = &f * 4i64;
        let one_plus = &four_f + 1i64;
        (&one_plus / 4i64, &four_f / &one_plus)
    };
    Ok(BoundConstants { f_p: f, a_p: a, r_p: r })
}

/// `(A, R) = (max(1/2, 2f(p)), 1/2)`: satisfies `RA ≥ f`, `1/(4A)+R ≤ 1`
/// and `2R ≤ 1`, so both the excursion and the bridge bounds close. Equal
/// to [`bound_constants`] when `f(p) ≤ 1/4`.
pub fn bound_constants_bridge_safe(p: &Rat, prec: u32) -> Result<BoundConstants> {
    let c = bound_constants(p, prec)?;
    let half = Real::from_f64(prec, 0.5);
    let a = (&c.f_p * 2i64).max(half.clone());
    Ok(BoundConstants {
        f_p: c.f_p,
        a_p: a,
        r_p: half,
    })
}

/// Per-order ratios `bound/|μ_s|`; `None` where `μ_s = 0`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub constants: BoundConstants,
    /// Excursion margins for `s = 1..=s_max`.
    pub excursion: Vec<Option<Real>>,
    /// Bridge margins for `s = 0..=s_max`.
    pub bridge: Vec<Option<Real>>,
}

impl BoundReport {
    pub fn min_margin(&self) -> Option<Real> {
        self.excursion
            .iter()
            .chain(&self.bridge)
            .flatten()
            .cloned()
            .reduce(|a, b| a.min(b))
    }
}

impl BoundReport {
    /// First `(ensemble, s)` with margin below one.
    pub fn first_violation(&self) -> Option<(Ensemble, usize)> {
        let bad = |m: &Option<Real>| m.as_ref().is_some_and(|m| m.to_f64() < 1.0 - 1e-30);
        if let Some(i) = self.excursion.iter().position(bad) {
            return Some((Ensemble::Excursion, i + 1));
        }
        self.bridge.iter().position(bad).map(|s| (Ensemble::Bridge, s))
    }
}

/// Checks `|μ^(E)_s| ≤ R A^s Γ(ps+1) C_{s-1}` and
/// `|μ^(B)_s| ≤ A^s Γ(ps+1) C_s` with [`bound_constants`].
pub fn verify_bounds(p: &Rat, s_max: usize, prec: u32) -> Result<BoundReport> {
    let r = bound_margins(p, s_max, bound_constants(p, prec)?, prec)?;
    if let Some((e, s)) = r.first_violation() {
        let m = match e {
            Ensemble::Excursion => &r.excursion[s - 1],
            Ensemble::Bridge => &r.bridge[s],
        };
        return Err(Error::BoundViolation {
            s,
            detail: format!(
                "{e} bound/|μ| = {}",
                m.as_ref().map_or("-".into(), |m| m.to_sci_string(12))
            ),
        });
    }
    Ok(r)
}

/// Margins for arbitrary constants, without failing on violations.
pub fn bound_margins(p: &Rat, s_max: usize, c: BoundConstants, prec: u32) -> Result<BoundReport> {
    let mu_e = mu_excursion(p, s_max, prec)?;
    let mu_b = mu_bridge(p, s_max, prec)?;
    let gamma_ps = |s: usize| -> Result<Real> {
        Ok(rgamma_rat(&(Rat::from(p * s as u32) + 1u32), prec)?.recip())
    };
    let margin = |bound: Real, mu: Real| -> Option<Real> {
        (!mu.is_zero()).then(|| bound / mu.abs())
    };
    let mut excursion = Vec::new();
    for s in 1..=s_max {
        let bound = &c.r_p
            * c.a_p.powi(s as i32)
            * gamma_ps(s)?
            * Real::from_rat(prec, &catalan(s as u32 - 1));
        let m = margin(bound, mu_e[s].to_real(prec));
        excursion.push(m);
    }
    let mut bridge = Vec::new();
    for s in 0..=s_max {
        let bound = c.a_p.powi(s as i32) * gamma_ps(s)? * Real::from_rat(prec, &catalan(s as u32));
        let m = margin(bound, mu_b[s].to_real(prec));
        bridge.push(m);
    }
    Ok(BoundReport {
        constants: c,
        excursion,
        bridge,
    })
}

/// Least-squares fit `ln|M̄_s| ≈ a s ln s + b s + c ln s + d`.
#[derive(Clone, Debug)]
pub struct CarlemanFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `max_s (ln|M̄_s| - (s/2) ln s) / s`
    pub max_excess_per_s: f64,
}

pub fn carleman_fit(ensemble: Ensemble, p: &Rat, s_max: usize, prec: u32) -> Result<CarlemanFit> {
    if s_max < 8 {
        return Err(Error::InvalidArgument("carleman_fit needs s_max >= 8".into()));
    }
    let m = rescaled_moments(ensemble, p, s_max, prec)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excess = f64::NEG_INFINITY;
    for (s, v) in m.iter().enumerate().skip(2) {
        let v = v.to_real(prec).abs();
        if v.is_zero() {
            continue;
        }
        let y = v.ln().to_f64();
        let sf = s as f64;
        let ls = sf.ln();
        excess = excess.max((y - 0.5 * sf * ls) / sf);
        xs.push([sf * ls, sf, ls, 1.0]);
        ys.push(y);
    }
    // normal equations at working precision
    let w = 128;
    let mut ata = vec![vec![Real::zero(w); 4]; 4];
    let mut aty = vec![Real::zero(w); 4];
    for (x, y) in xs.iter().zip(&ys) {
        for i in 0..4 {
            aty[i] += Real::from_f64(w, x[i] * y);
            for j in 0..4 {
                ata[i][j] += Real::from_f64(w, x[i] * x[j]);
            }
        }
    }
    let sol = solve_linear(ata, aty)?;
    Ok(CarlemanFit {
        a: sol[0].to_f64(),
        b: sol[1].to_f64(),
        c: sol[2].to_f64(),
        d: sol[3].to_f64(),
        max_excess_per_s: excess,
    })
}
