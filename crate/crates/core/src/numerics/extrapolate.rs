//! Limits of sequences by generalized Richardson extrapolation.
//!
//! A sequence `y(x)` is modelled as `c_0 + Σ_j c_j φ_j(x)` with known basis
//! functions; solving for `c_0` from as many samples as unknowns removes the
//! listed correction terms exactly.

use super::Real;
use crate::error::{Error, Result};

/// Outcome of a limit fit.
#[derive(Clone, Debug)]
pub struct FitResult {
    /// `c_0`, the extrapolated limit.
    pub limit: Real,
    /// All fitted coefficients, `coeffs[0] == limit`.
    pub coeffs: Vec<Real>,
    /// Difference to the fit with one basis function and one sample fewer.
    pub error: Real,
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting.
pub fn solve_linear(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Result<Vec<Real>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("solve_linear needs a square system".into()));
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[piv][col].is_zero() {
            return Err(Error::ExtrapolationUnstable("singular fit matrix".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = &a[row][col] / &a[col][col];
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = &f * &a[col][k];
                a[row][k] -= t;
            }
            let t = &f * &b[col];
            b[row] -= t;
        }
    }
    let mut x = vec![Real::zero(b[0].prec()); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Fits `ys[i] = Σ_j c_j rows[i][j]` and returns `c_0`.
///
/// `rows[i][0]` should be 1. Samples are ordered from least to most
/// accurate; the last `m` samples are used, where `m` is the row length.
pub fn fit_limit(rows: &[Vec<Real>], ys: &[Real]) -> Result<FitResult> {
    let m = rows.first().map_or(0, Vec::len);
    if m == 0 || rows.len() < m || ys.len() != rows.len() {
        return Err(Error::InvalidArgument(format!(
            "fit_limit: {} samples for {} unknowns",
            rows.len(),
            m
        )));
    }
    let n = rows.len();
    let solve = |k: usize| -> Result<Vec<Real>> {
        let a = rows[n - k..].iter().map(|r| r[..k].to_vec()).collect();
        solve_linear(a, ys[n - k..].to_vec())
    };
    let coeffs = solve(m)?;
    let error = if m > 1 {
        (&coeffs[0] - &solve(m - 1)?[0]).abs()
    } else {
        (&ys[n - 1] - &ys[n - 2.min(n)]).abs()
    };
    Ok(FitResult {
        limit: coeffs[0].clone(),
        coeffs,
        error,
    })
}

/// Rows `[1, h^e_1, h^e_2, ...]` for a power-law Richardson fit.
pub fn power_rows(hs: &[Real], exponents: &[Real]) -> Vec<Vec<Real>> {
    hs.iter()
        .map(|h| {
            std::iter::once(Real::one(h.prec()))
                .chain(exponents.iter().map(|e| h.powf(e)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let r = |v: i64| Real::from_int(128, v);
        let a = vec![vec![r(0), r(2), r(1)], vec![r(1), r(1), r(1)], vec![r(2), r(1), r(0)]];
        let b = vec![r(5), r(4), r(4)];
        let x = solve_linear(a, b).unwrap();
        // solution (1, 2, 1)
        for (xi, want) in x.iter().zip([1i64, 2, 1]) {
            assert!((xi - want).abs() < 1e-35);
        }
    }

    #[test]
    fn singular_system_is_reported() {
        let r = |v: i64| Real::from_int(64, v);
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(solve_linear(a, vec![r(1), r(2)]).is_err());
    }

    #[test]
    fn richardson_removes_known_powers() {
        // y(h) = 3 + 2h^2 - h^4 + 5h^6 sampled at h = 1/2^k
        let prec = 200;
        let hs: Vec<Real> = (1..6).map(|k| Real::from_f64(prec, 0.5f64.powi(k))).collect();
        let ys: Vec<Real> = hs
            .iter()
            .map(|h| {
                let h2 = h * h;
                Real::from_int(prec, 3) + &h2 * 2i64 - &h2 * &h2 + h2.powi(3) * 5i64
            })
            .collect();
        let exps: Vec<Real> = [2, 4, 6].iter().map(|&e| Real::from_int(prec, e)).collect();
        let fit = fit_limit(&power_rows(&hs, &exps), &ys).unwrap();
        assert!((&fit.limit - 3i64).abs() < 1e-55);
        assert!(fit.error.to_f64() > 0.0);
    }
}
