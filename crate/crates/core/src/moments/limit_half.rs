//! Shifted moments at `p = 1/2` as limits of `p = 1/2 ± δ`.

use super::{Ensemble, MomentTable};
use crate::error::{Error, Result};
use crate::numerics::{fit_limit, Constants, Rat, Real};

/// `10^-2, 10^-3, 10^-4`.
pub const DEFAULT_DELTAS: [(i64, i64); 3] = [(1, 100), (1, 1000), (1, 10000)];

#[derive(Clone, Debug)]
pub struct LimitHalfValue {
    pub s: usize,
    pub value: Real,
    pub error: Real,
    /// `(δ, symmetric average at ±δ)` in ladder order.
    pub samples: Vec<(Rat, Real)>,
}

/// `(2√π)^s ⟨(x_p - t(p))^s⟩` at `p = 1/2 ± δ`, averaged over the sign of
/// `δ` and extrapolated to `δ = 0` by a polynomial fit in `δ²`.
///
/// The ladder is sorted by decreasing `δ`. Returns `s = 0..=s_max`.
pub fn limit_half_moments(s_max: usize, deltas: &[Rat], prec: u32) -> Result<Vec<LimitHalfValue>> {
    if deltas.is_empty() || deltas.iter().any(|d| *d <= 0 || *d >= Rat::from((1, 2))) {
        return Err(Error::InvalidArgument("deltas must lie in (0, 1/2)".into()));
    }
    let mut ladder = deltas.to_vec();
    ladder.sort_by(|a, b| b.cmp(a));
    ladder.dedup();

    let w = prec + 32;
    let half = Rat::from((1, 2));
    let scale = &Constants::get(w).sqrt_pi * 2i64;
    let mut per_delta: Vec<Vec<Real>> = Vec::new();
    for d in &ladder {
        let plus = MomentTable::new(Ensemble::Excursion, &Rat::from(&half + d), s_max, w)?;
        let minus = MomentTable::new(Ensemble::Excursion, &Rat::from(&half - d), s_max, w)?;
        let avg = (0..=s_max)
            .map(|s| (&plus.shifted[s] + &minus.shifted[s]) / 2i64 * scale.powi(s as i32))
            .collect();
        per_delta.push(avg);
    }

    let hs: Vec<Real> = ladder.iter().map(|d| Real::from_rat(w, &Rat::from(d * d))).collect();
    let rows: Vec<Vec<Real>> = hs
        .iter()
        .map(|h| (0..ladder.len()).map(|j| h.powi(j as i32)).collect())
        .collect();
    let mut out = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let ys: Vec<Real> = per_delta.iter().map(|v| v[s].clone()).collect();
        let fit = fit_limit(&rows, &ys)?;
        let (value, error) = if ladder.len() == 1 {
            let e = ys[0].abs();
            (fit.limit, e)
        } else {
            (fit.limit, fit.error)
        };
        // the last correction term should be small against the limit
        let tol = value.abs().max(Real::one(w)) * Real::from_f64(w, 1e-3);
        if !value.is_finite() || error > tol {
            return Err(Error::ExtrapolationUnstable(format!(
                "s = {s}: estimate {} with error {}",
                value.to_sci_string(10),
                error.to_sci_string(3)
            )));
        }
        out.push(LimitHalfValue {
            s,
            value: value.with_prec(prec),
            error: error.with_prec(prec),
            samples: ladder.iter().cloned().zip(ys.into_iter().map(|y| y.with_prec(prec))).collect(),
        });
    }
    Ok(out)
}
