//! The logarithmic cost `ln(k+1)`: τ-coefficients and the Gaussian limit.

use crate::numerics::{catalan, double_factorial, Constants, Rat, Real};

/// Exact coefficient `r_s` in `τ_s = r_s γ_E^(s/2)`; zero for odd `s`.
/// Index 0 and 1 are zero.
pub fn tau_log_coefficients(s_max: usize) -> Vec<Rat> {
    (0..=s_max)
        .map(|s| {
            if s < 2 || s % 2 == 1 {
                return Rat::new();
            }
            let l = (s / 2) as u32;
            // C_{l-1} 2^(1-l) (1/4)^l
            catalan(l - 1) >> (3 * l - 1)
        })
        .collect()
}

/// The same coefficients from the quadratic recursion
/// `τ_s = 1/2 Σ_{k=2}^{s-2} τ_k τ_{s-k}` seeded with `τ_2`.
pub fn tau_log_convolution(s_max: usize) -> Vec<Rat> {
    let mut t = vec![Rat::new(); s_max + 1];
    if s_max >= 2 {
        t[2] = Rat::from((1, 4));
    }
    for s in 3..=s_max {
        let mut v = Rat::new();
        for k in 2..=s - 2 {
            v += Rat::from(&t[k] * &t[s - k]);
        }
        t[s] = v / 2u32;
    }
    t
}

/// `τ_0 .. τ_{s_max}` as reals.
pub fn tau_log(s_max: usize, prec: u32) -> Vec<Real> {
    let g = Constants::get(prec).euler_gamma.clone();
    tau_log_coefficients(s_max)
        .iter()
        .enumerate()
        .map(|(s, r)| Real::from_rat(prec, r) * g.powi((s / 2) as i32))
        .collect()
}

/// Limiting moments `γ_E^l (2l-1)!!` at `s = 2l`, zero at odd `s`.
pub fn gaussian_log_moments(s_max: usize, prec: u32) -> Vec<Real> {
    let g = Constants::get(prec).euler_gamma.clone();
    (0..=s_max)
        .map(|s| {
            if s % 2 == 1 {
                Real::zero(prec)
            } else {
                let l = (s / 2) as i32;
                g.powi(l) * Real::from_rat(prec, &double_factorial(2 * l as i64 - 1))
            }
        })
        .collect()
}
