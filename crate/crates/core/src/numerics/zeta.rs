//! Riemann zeta by Euler–Maclaurin summation.

use rug::Float;

use super::{bernoulli, Real};
use crate::error::{Error, Result};

/// `ζ(s)` for real `s > 1`, at the precision of `s`.
pub fn zeta(s: &Real) -> Result<Real> {
    let prec = s.prec();
    if !(s > &1i64) {
        return Err(Error::Domain(format!("zeta needs s > 1, got {}", s.to_f64())));
    }
    let w = prec + 32;
    let s = s.with_prec(w);
    let n_cut = (w as i64 / 3).max(16);
    let big_n = Real::from_int(w, n_cut);

    let mut sum = Real::zero(w);
    let neg_s = -&s;
    for n in 1..n_cut {
        sum += Real::from_int(w, n).powf(&neg_s);
    }
    let n_pow = big_n.powf(&neg_s);
    sum += &n_pow * &big_n / (&s - 1i64);
    sum += &n_pow / 2i64;

    // Tail: sum_k B_2k/(2k)! (s)_(2k-1) N^(-s-2k+1)
    let tiny = Real::from_float(Float::with_val(w, Float::i_exp(1, -(w as i32))));
    let n2 = &big_n * &big_n;
    let mut rising = s.clone(); // (s)_(2k-1)
    let mut npow = &n_pow / &big_n; // N^(-s-2k+1) at k = 1
    let mut fact = Real::from_int(w, 2); // (2k)!
    let mut prev: Option<Real> = None;
    for k in 1..1000i64 {
        let b = Real::from_rat(w, &bernoulli(2 * k as usize));
        let term = &b / &fact * &rising * &npow;
        let mag = term.abs();
        if prev.as_ref().is_some_and(|p| &mag > p) {
            break;
        }
        sum += &term;
        if mag < &tiny * &sum {
            break;
        }
        prev = Some(mag);
        rising = rising * (&s + (2 * k - 1)) * (&s + 2 * k);
        npow = npow / &n2;
        fact = fact * ((2 * k + 1) * (2 * k + 2));
    }
    Ok(sum.with_prec(prec))
}
