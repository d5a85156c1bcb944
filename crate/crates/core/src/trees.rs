//! Rooted planar trees, the tree expansion of `μ^(E)_s`, and the diagrams
//! at `p = 1/2`.

use crate::error::{Error, Result};
use crate::moments::mu_excursion;
use crate::numerics::{
    catalan, fit_limit, gamma, gamma_ratio_rat, rel_diff, rgamma, Constants, Number, Rat, Real,
    Scalar,
};
use crate::series::TruncSeries;

/// Largest `s` accepted by [`enumerate_trees`] (`C_12 = 208012` trees).
pub const TREE_CAP: usize = 12;

/// A rooted planar tree stored as its preorder sequence of child counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeShape {
    children: Vec<usize>,
}

impl TreeShape {
    /// Validates a preorder child-count sequence (Łukasiewicz word).
    pub fn from_child_counts(children: Vec<usize>) -> Result<TreeShape> {
        let mut open = 1i64;
        for (i, &c) in children.iter().enumerate() {
            if open <= 0 {
                return Err(Error::InvalidArgument(format!(
                    "child counts close the tree before position {i}"
                )));
            }
            open += c as i64 - 1;
        }
        if open != 0 || children.is_empty() {
            return Err(Error::InvalidArgument("child counts do not describe one tree".into()));
        }
        Ok(TreeShape { children })
    }

    pub fn child_counts(&self) -> &[usize] {
        &self.children
    }

    /// Number of non-root vertices.
    pub fn s(&self) -> usize {
        self.children.len() - 1
    }

    /// Parent of each vertex in preorder; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.children.len()];
        let mut stack: Vec<(usize, usize)> = Vec::new(); // (vertex, children still to come)
        for (v, &c) in self.children.iter().enumerate() {
            if let Some(top) = stack.last_mut() {
                parent[v] = Some(top.0);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if c > 0 {
                stack.push((v, c));
            }
        }
        parent
    }

    /// `k_v`, the number of descendants of each vertex.
    pub fn descendants(&self) -> Vec<usize> {
        let parent = self.parents();
        let mut k = vec![0; self.children.len()];
        for v in (1..self.children.len()).rev() {
            let p = parent[v].expect("non-root");
            k[p] += k[v] + 1;
        }
        k
    }

    /// Leaves in preorder.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.children.len()).filter(|&v| self.children[v] == 0).collect()
    }

    /// For each vertex, the positions (in [`leaves`](Self::leaves)) of the
    /// leaves strictly below it.
    pub fn leaf_sets(&self) -> Vec<Vec<usize>> {
        let parent = self.parents();
        let leaves = self.leaves();
        let mut sets = vec![Vec::new(); self.children.len()];
        for (i, &leaf) in leaves.iter().enumerate() {
            let mut v = parent[leaf];
            while let Some(u) = v {
                sets[u].push(i);
                v = parent[u];
            }
        }
        sets
    }

    /// Hook lengths `k_v + 1`.
    pub fn hooks(&self) -> Vec<usize> {
        self.descendants().into_iter().map(|k| k + 1).collect()
    }
}

/// All trees with `s` non-root vertices in lexicographic order of their
/// child-count sequences.
pub fn enumerate_trees(s: usize) -> Result<Vec<TreeShape>> {
    if s > TREE_CAP {
        return Err(Error::CapExceeded {
            what: "tree size s",
            value: s,
            cap: TREE_CAP,
        });
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(s + 1);
    fill(&mut word, s + 1, 1, &mut out);
    Ok(out)
}

fn fill(word: &mut Vec<usize>, len: usize, open: usize, out: &mut Vec<TreeShape>) {
    let left = len - word.len();
    if left == 0 {
        if open == 0 {
            out.push(TreeShape { children: word.clone() });
        }
        return;
    }
    if open == 0 {
        return;
    }
    // after this vertex, `left - 1` vertices must absorb `open - 1 + c` slots
    for c in 0..left {
        let next = open - 1 + c;
        if next > left - 1 {
            break;
        }
        word.push(c);
        fill(word, len, next, out);
        word.pop();
    }
}

/// `a(ℓ) = 4^(ℓ-1) Γ(ℓ-1/2)/(√π Γ(ℓ+1))`: `-1/2` at 0, `C_{ℓ-1}` after.
pub fn weight_a(l: usize) -> Rat {
    if l == 0 {
        Rat::from((-1, 2))
    } else {
        catalan(l as u32 - 1)
    }
}

/// `b(k) = Γ((k+1)(p-1/2)+k) / (2Γ(k(p-1/2)+k-1/2))`.
pub fn weight_b(k: usize, p: &Rat, prec: u32) -> Result<Number> {
    let q = Rat::from(p - Rat::from((1, 2)));
    let x = Rat::from(&q * (k as u32 + 1)) + k as u32;
    let y = Rat::from(&q * k as u32) + Rat::from((2 * k as i64 - 1, 2));
    Ok(match gamma_ratio_rat(&x, &y, prec)? {
        Number::Exact(r) => Number::Exact(r / 2u32),
        Number::Approx(r) => Number::Approx(r / 2i64),
    })
}

fn weights<S: Scalar>(s: usize, p: &Rat, ctx: S::Ctx, prec: u32) -> Result<(Vec<S>, Vec<S>)> {
    let a = (0..=s).map(|l| S::from_rat(ctx, &weight_a(l))).collect();
    let b = (0..=s)
        .map(|k| S::from_number(ctx, &weight_b(k, p, prec)?))
        .collect::<Result<_>>()?;
    Ok((a, b))
}

fn nu_in<S: Scalar>(s_max: usize, p: &Rat, ctx: S::Ctx, prec: u32) -> Result<Vec<S>> {
    let (a, b) = weights::<S>(s_max, p, ctx, prec)?;
    (0..=s_max)
        .map(|s| {
            let mut total = S::zero(ctx);
            for t in enumerate_trees(s)? {
                let mut w = S::one(ctx);
                for (l, k) in t.child_counts().iter().zip(t.descendants()) {
                    w = w.mul(&a[*l]).mul(&b[k]);
                }
                total = total.add(&w);
            }
            Ok(total)
        })
        .collect()
}

/// `ν(0) .. ν(s_max)`, each a sum over all trees of `Π_v a(ℓ_v) b(k_v)`.
pub fn nu(s_max: usize, p: &Rat, prec: u32) -> Result<Vec<Number>> {
    match nu_in::<Rat>(s_max, p, (), prec) {
        Ok(v) => Ok(v.into_iter().map(Number::Exact).collect()),
        Err(Error::NotRational(_)) => {
            Ok(nu_in::<Real>(s_max, p, prec, prec)?.into_iter().map(Number::Approx).collect())
        }
        Err(e) => Err(e),
    }
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug)]
pub struct CheckReport {
    /// Largest relative deviation (absolute where the reference is zero).
    pub max_deviation: Real,
    pub orders: usize,
}

/// Compares `ν(s)/b(s)` from the tree sums with `μ^(E)_s` from the
/// recursion for `1 ≤ s ≤ s_max`.
pub fn check_mu_equals_tree_sum(s_max: usize, p: &Rat, tol: f64, prec: u32) -> Result<CheckReport> {
    let nu = nu(s_max, p, prec)?;
    let mu = mu_excursion(p, s_max, prec)?;
    let mut worst = Real::zero(prec);
    for s in 1..=s_max {
        let b = weight_b(s, p, prec)?;
        let lhs = nu[s].to_real(prec) / b.to_real(prec);
        let d = deviation(&lhs, &mu[s].to_real(prec));
        if d > tol {
            return Err(Error::Mismatch(format!(
                "s = {s}: tree sum {} vs recursion {}",
                lhs.to_sci_string(20),
                mu[s].decimal_string(20)
            )));
        }
        worst = worst.max(d);
    }
    Ok(CheckReport {
        max_deviation: worst,
        orders: s_max,
    })
}

fn deviation(a: &Real, b: &Real) -> Real {
    if b.is_zero() {
        a.abs()
    } else {
        rel_diff(a, b)
    }
}

/// `X(z) = Σ ν(s-1) z^s` and `Y(z) = Σ ν(s)/b(s) z^s` through `z^order`.
pub fn xy_series(order: usize, p: &Rat, prec: u32) -> Result<(TruncSeries<Real>, TruncSeries<Real>)> {
    let nu = nu(order, p, prec)?;
    let mut x = vec![Real::zero(prec); order + 1];
    let mut y = vec![Real::zero(prec); order + 1];
    for s in 1..=order {
        x[s] = nu[s - 1].to_real(prec);
        y[s] = nu[s].to_real(prec) / weight_b(s, p, prec)?.to_real(prec);
    }
    Ok((TruncSeries::from_coeffs(x), TruncSeries::from_coeffs(y)))
}

/// Checks `Y = X + Y²` coefficientwise through `z^order`.
pub fn check_xy_identity(order: usize, p: &Rat, tol: f64, prec: u32) -> Result<CheckReport> {
    let (x, y) = xy_series(order, p, prec)?;
    let rhs = x.add(&y.mul(&y)?)?;
    compare(&y, &rhs, tol, "Y = X + Y^2")
}

/// Checks `A(X(z)) - A(0) = Y(z)` with `A(z) = Σ a(ℓ) z^ℓ`.
pub fn check_a_of_x(order: usize, p: &Rat, tol: f64, prec: u32) -> Result<CheckReport> {
    let (x, y) = xy_series(order, p, prec)?;
    let mut outer: Vec<Real> = (0..=order).map(|l| Real::from_rat(prec, &weight_a(l))).collect();
    outer[0] = Real::zero(prec);
    let lhs = TruncSeries::compose(&outer, &x)?;
    compare(&lhs, &y, tol, "A(X) - A(0) = Y")
}

fn compare(a: &TruncSeries<Real>, b: &TruncSeries<Real>, tol: f64, what: &str) -> Result<CheckReport> {
    let prec = a.coeff(0).prec();
    let mut worst = Real::zero(prec);
    for n in 0..=a.order() {
        let d = deviation(a.coeff(n), b.coeff(n));
        if d > tol {
            return Err(Error::Mismatch(format!(
                "{what} fails at z^{n}: {} vs {}",
                a.coeff(n).to_sci_string(20),
                b.coeff(n).to_sci_string(20)
            )));
        }
        worst = worst.max(d);
    }
    Ok(CheckReport {
        max_deviation: worst,
        orders: a.order(),
    })
}

/// One tree's contribution at `p = 1/2`.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub tree: TreeShape,
    pub value: Real,
    pub error: Real,
}

#[derive(Clone, Debug)]
pub struct HalfPointDiagrams {
    pub s: usize,
    pub diagrams: Vec<Diagram>,
    /// Sum of the diagram terms, with the `8√π s!` prefactor: the shifted
    /// moment `⟨(x - t)^s⟩` at `p = 1/2`, without the `(2√π)^s` scaling.
    pub total: Real,
    pub error: Real,
}

/// Diagram sum for the shifted moments at `p = 1/2`.
///
/// Each tree contributes `8√π s! (-C)^|U| ∂_U F(0)` with `C = 1/(8√π)` and
/// `F(y) = e^(ξ y_r)/Γ(s - y_r) Π_{v ∉ U} a(ℓ_v) b(k_v - y_v)`, where
/// `ξ = 2 ln 2 + γ_E` and `b(x) = Γ(x)/(2Γ(x - 1/2))`. The mixed derivative
/// uses central differences at `h, h/2, h/4, h/8` extrapolated in `h²`.
pub fn half_point_diagrams(s: usize, fd_step: f64, prec: u32) -> Result<HalfPointDiagrams> {
    if !(1..=4).contains(&s) {
        return Err(Error::InvalidArgument(format!("half_point_diagrams needs 1 <= s <= 4, got {s}")));
    }
    if !(fd_step > 0.0 && fd_step < 0.25) {
        return Err(Error::InvalidArgument("fd_step must lie in (0, 1/4)".into()));
    }
    let w = prec + 64;
    let c = Constants::get(w);
    let xi = &c.ln2 * 2i64 + &c.euler_gamma;
    let big_c = (&c.sqrt_pi * 8i64).recip();
    let pref = &c.sqrt_pi * 8i64 * Real::from_integer(w, &crate::numerics::factorial(s as u32));
    let mut diagrams = Vec::new();
    let mut total = Real::zero(w);
    let mut error = Real::zero(w);
    for tree in enumerate_trees(s)? {
        let n = tree.leaves().len();
        let (d, e) = mixed_derivative(&tree, &xi, fd_step, w)?;
        let scale = &pref * (-&big_c).powi(n as i32);
        let value = &scale * d;
        let err = scale.abs() * e;
        total += &value;
        error += &err;
        diagrams.push(Diagram {
            tree,
            value: value.with_prec(prec),
            error: err.with_prec(prec),
        });
    }
    Ok(HalfPointDiagrams {
        s,
        diagrams,
        total: total.with_prec(prec),
        error: error.with_prec(prec),
    })
}

fn diagram_integrand(tree: &TreeShape, xi: &Real, y: &[Real], w: u32) -> Result<Real> {
    let s = tree.s();
    let sets = tree.leaf_sets();
    let ks = tree.descendants();
    let yr: Real = y.iter().cloned().sum::<Real>() + Real::zero(w);
    let mut f = (xi * &yr).exp() * rgamma(&(Real::from_int(w, s as i64) - &yr))?;
    let half = Real::from_f64(w, 0.5);
    for (v, &l) in tree.child_counts().iter().enumerate() {
        if l == 0 {
            continue;
        }
        let yv: Real = sets[v].iter().map(|&i| y[i].clone()).sum::<Real>() + Real::zero(w);
        let x = Real::from_int(w, ks[v] as i64) - yv;
        let b = gamma(&x)? * rgamma(&(&x - &half))? / 2i64;
        f *= b * Real::from_rat(w, &weight_a(l));
    }
    Ok(f)
}

/// `∂^n F/∂y_1..∂y_n` at 0 and an error estimate.
fn mixed_derivative(tree: &TreeShape, xi: &Real, h0: f64, w: u32) -> Result<(Real, Real)> {
    let n = tree.leaves().len();
    let levels = 4;
    let mut hs = Vec::new();
    let mut ds = Vec::new();
    for lvl in 0..levels {
        let h = Real::from_f64(w, h0) / (1i64 << lvl);
        let mut acc = Real::zero(w);
        for mask in 0..(1u32 << n) {
            let y: Vec<Real> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -&h } else { h.clone() })
                .collect();
            let f = diagram_integrand(tree, xi, &y, w)?;
            if mask.count_ones() % 2 == 1 {
                acc -= f;
            } else {
                acc += f;
            }
        }
        ds.push(acc / (&h * 2i64).powi(n as i32));
        hs.push(&h * &h);
    }
    let rows: Vec<Vec<Real>> = hs
        .iter()
        .map(|h2| (0..levels).map(|j| h2.powi(j as i32)).collect())
        .collect();
    let fit = fit_limit(&rows, &ds)?;
    let tol = fit.limit.abs().max(Real::one(w)) * Real::from_f64(w, 1e-8);
    if fit.error > tol {
        return Err(Error::DerivativeUnstable(format!(
            "mixed derivative over {n} leaves: levels disagree by {}",
            fit.error.to_sci_string(3)
        )));
    }
    Ok((fit.limit, fit.error))
}
