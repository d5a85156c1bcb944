//! Truncated power series over exact or high-precision scalars.

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::numerics::{Rat, Scalar};

/// Coefficients of `z^0 .. z^M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncSeries<S> {
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize, ctx: S::Ctx) -> Self {
        TruncSeries {
            coeffs: vec![S::zero(ctx); order + 1],
        }
    }

    pub fn one(order: usize, ctx: S::Ctx) -> Self {
        let mut s = Self::zero(order, ctx);
        s.coeffs[0] = S::one(ctx);
        s
    }

    /// `1/(1-z)`.
    pub fn geometric(order: usize, ctx: S::Ctx) -> Self {
        TruncSeries {
            coeffs: vec![S::one(ctx); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &S {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    fn ctx(&self) -> S::Ctx {
        self.coeffs[0].ctx()
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let m = self.order();
        let ctx = self.ctx();
        let mut out = vec![S::zero(ctx); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=m - i].iter().enumerate() {
                out[i + j].add_mul(a, b);
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Coefficientwise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.mul(b)).collect(),
        })
    }

    /// `f(z)/z`; the constant term must vanish. The top coefficient of the
    /// result is unknown and is dropped, lowering the order by one.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "division by z needs a zero constant term".into(),
            ));
        }
        if self.order() == 0 {
            return Err(Error::InvalidArgument("division by z of an order-0 series".into()));
        }
        Ok(TruncSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `z f(z)` at the same order.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(S::zero(self.ctx()));
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        TruncSeries { coeffs }
    }

    /// Same series at another order (truncating or padding with zeros).
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, S::zero(self.ctx()));
        TruncSeries { coeffs }
    }

    /// `Σ_n outer[n] g^n`, with `g` having zero constant term.
    pub fn compose(outer: &[S], g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let m = g.order();
        let ctx = g.ctx();
        let mut acc = TruncSeries::zero(m, ctx);
        // Horner from the highest power that can contribute.
        for c in outer.iter().take(m + 1).rev() {
            acc = acc.mul(g)?;
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// Coefficients of `(1-z)^(-α)`: `Γ(N+α)/(Γ(α)Γ(N+1))`.
    pub fn binomial_series(alpha: &S, order: usize) -> Result<Self> {
        let ctx = alpha.ctx();
        if let Some(k) = nonpositive_integer(alpha) {
            return Err(Error::Pole(format!(
                "(1-z)^(-α) coefficients need Γ(α), which has a pole at α = {k}"
            )));
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = S::one(ctx);
        for n in 0..=order {
            coeffs.push(c.clone());
            // c_{n+1} = c_n (n + α) / (n + 1)
            c = c.mul(&alpha.add(&S::from_i64(ctx, n as i64))).div_i64(n as i64 + 1);
        }
        Ok(TruncSeries { coeffs })
    }

    /// `√(1-z)`.
    pub fn sqrt_one_minus_z(order: usize, ctx: S::Ctx) -> Self {
        Self::binomial_series(&S::from_rat(ctx, &Rat::from((-1, 2))), order)
            .expect("-1/2 is not a pole")
    }

    /// `1/√(1-z)`.
    pub fn inv_sqrt_one_minus_z(order: usize, ctx: S::Ctx) -> Self {
        Self::binomial_series(&S::from_rat(ctx, &Rat::from((1, 2))), order)
            .expect("1/2 is not a pole")
    }

    /// `E_0(z) = (1 - √(1-z))/z`, the normalized Catalan generating function.
    pub fn e0(order: usize, ctx: S::Ctx) -> Self {
        let s = Self::sqrt_one_minus_z(order + 1, ctx);
        let one = Self::one(order + 1, ctx);
        one.sub(&s).and_then(|d| d.div_z()).expect("orders agree")
    }

    /// `L̂^k`: multiplies coefficient `N` by `(ω(N) - ε)^k`.
    pub fn apply_l(&self, omega: &CostFunction, eps: &S, k: u32, prec: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("apply_L needs k >= 1".into()));
        }
        let w = omega.table::<S>(self.order(), self.ctx(), prec)?;
        Ok(self.apply_weights(&w, eps, k))
    }

    /// `L̂^k` with precomputed `ω(0..=M)`.
    pub fn apply_weights(&self, omega: &[S], eps: &S, k: u32) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(omega)
                .map(|(f, w)| f.mul(&w.sub(eps).pow_u32(k)))
                .collect(),
        }
    }
}

fn nonpositive_integer<S: Scalar>(x: &S) -> Option<i64> {
    match x.to_number() {
        crate::numerics::Number::Exact(r) => {
            (*r.denom() == 1 && r <= 0).then(|| r.numer().to_i64().unwrap_or(i64::MIN))
        }
        crate::numerics::Number::Approx(v) => {
            crate::numerics::is_nonpositive_integer(&v).then(|| v.to_f64() as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{normalized_catalan, Real};

    fn rs(v: &[i64]) -> TruncSeries<Rat> {
        TruncSeries::from_coeffs(v.iter().map(|&x| Rat::from(x)).collect())
    }

    #[test]
    fn product_of_binomials() {
        let f = rs(&[1, 1, 0]);
        let g = rs(&[1, -1, 0]);
        assert_eq!(f.mul(&g).unwrap(), rs(&[1, 0, -1]));
        assert_eq!(f.mul(&TruncSeries::one(2, ())).unwrap(), f);
        assert!(matches!(f.mul(&rs(&[1, 2])), Err(Error::OrderMismatch(2, 1))));
    }

    #[test]
    fn hadamard_identity_and_zero() {
        let f = rs(&[3, -1, 4, 1, -5]);
        assert_eq!(f.hadamard(&TruncSeries::geometric(4, ())).unwrap(), f);
        assert_eq!(f.hadamard(&TruncSeries::zero(4, ())).unwrap(), TruncSeries::zero(4, ()));
    }

    #[test]
    fn sqrt_pair() {
        let s: TruncSeries<Rat> = TruncSeries::sqrt_one_minus_z(6, ());
        let want = [(1, 1), (-1, 2), (-1, 8), (-1, 16), (-5, 128)];
        for (c, w) in s.coeffs().iter().zip(want) {
            assert_eq!(*c, Rat::from(w));
        }
        let inv = TruncSeries::inv_sqrt_one_minus_z(6, ());
        assert_eq!(s.mul(&inv).unwrap(), TruncSeries::one(6, ()));
        assert_eq!(
            TruncSeries::<Rat>::binomial_series(&Rat::from(1), 5).unwrap(),
            TruncSeries::geometric(5, ())
        );
        assert!(TruncSeries::<Rat>::binomial_series(&Rat::from(-2), 5).is_err());
    }

    #[test]
    fn e0_coefficients_are_normalized_catalan() {
        let e0: TruncSeries<Rat> = TruncSeries::e0(64, ());
        for n in 0..=64 {
            assert_eq!(*e0.coeff(n), normalized_catalan(n as u32), "N = {n}");
        }
    }

    #[test]
    fn apply_l_on_e0() {
        let cf = CostFunction::gamma_ratio(Rat::from((1, 2)), Rat::from(1)).unwrap();
        let e0: TruncSeries<Rat> = TruncSeries::e0(10, ());
        let l = e0.apply_l(&cf, &Rat::new(), 1, 64).unwrap();
        for n in 0..=10u32 {
            let want = normalized_catalan(n) * (Rat::from(n) + Rat::from((1, 2)));
            assert_eq!(*l.coeff(n as usize), want);
        }
        // ε = ω(0) kills the constant term.
        let one = TruncSeries::one(3, ());
        let l = one.apply_l(&cf, &Rat::from((1, 2)), 1, 64).unwrap();
        assert_eq!(*l.coeff(0), 0);
        // L̂^2 = L̂ L̂
        let eps = Rat::from((1, 3));
        let twice = e0.apply_l(&cf, &eps, 1, 64).unwrap().apply_l(&cf, &eps, 1, 64).unwrap();
        assert_eq!(e0.apply_l(&cf, &eps, 2, 64).unwrap(), twice);
    }

    #[test]
    fn real_series_compose() {
        // 1/(1-g) with g = z gives the geometric series
        let ctx = 128;
        let g = TruncSeries::from_coeffs(vec![Real::zero(ctx), Real::one(ctx), Real::zero(ctx), Real::zero(ctx)]);
        let outer = vec![Real::one(ctx); 4];
        let c = TruncSeries::compose(&outer, &g).unwrap();
        assert_eq!(c, TruncSeries::geometric(3, ctx));
    }
}
