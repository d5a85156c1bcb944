//! Exact finite-N moments: explicit paths, brute force, and the
//! first-return coefficient DP.

use std::fmt;
use std::str::FromStr;

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::moments::{rescaled_moments, Ensemble};
use crate::numerics::{factorial, Number, Rat, Real, Scalar};

/// Largest semi-length for enumerating excursions.
pub const EXCURSION_ENUM_CAP: usize = 14;
/// Largest semi-length for enumerating bridges.
pub const BRIDGE_ENUM_CAP: usize = 12;
/// Largest `N` accepted by the DP.
pub const DP_N_CAP: usize = 16384;
/// Largest moment order accepted by the DP.
pub const DP_S_CAP: usize = 12;

/// A sequence of `±1` steps with zero sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    steps: Vec<i8>,
    ensemble: Ensemble,
}

impl LatticePath {
    pub fn new(steps: Vec<i8>, ensemble: Ensemble) -> Result<LatticePath> {
        if steps.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::MalformedPath("steps must be +1 or -1".into()));
        }
        let mut h = 0i64;
        for (i, &s) in steps.iter().enumerate() {
            h += s as i64;
            if ensemble == Ensemble::Excursion && h < 0 {
                return Err(Error::MalformedPath(format!("excursion goes below 0 at step {i}")));
            }
        }
        if h != 0 {
            return Err(Error::MalformedPath(format!("path ends at height {h}")));
        }
        Ok(LatticePath { steps, ensemble })
    }

    /// Builds a path without checks; callers guarantee validity.
    pub(crate) fn from_steps_unchecked(steps: Vec<i8>, ensemble: Ensemble) -> LatticePath {
        LatticePath { steps, ensemble }
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    /// Semi-length `N`.
    pub fn n(&self) -> usize {
        self.steps.len() / 2
    }

    /// `Σ_i |h_i|` with `h_i` the height at the midpoint of step `i`, in
    /// units of one half.
    pub fn twice_unsigned_area(&self) -> u64 {
        let mut h = 0i64;
        let mut total = 0u64;
        for &s in &self.steps {
            let next = h + s as i64;
            total += (h + next).unsigned_abs();
            h = next;
        }
        total
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.steps {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Parses `+-` (or `UD`) strings as excursions when possible, else bridges.
impl FromStr for LatticePath {
    type Err = Error;
    fn from_str(s: &str) -> Result<LatticePath> {
        let steps = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' | 'U' | 'u' => Ok(1),
                '-' | 'D' | 'd' => Ok(-1),
                _ => Err(Error::MalformedPath(format!("unexpected step `{c}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        LatticePath::new(steps.clone(), Ensemble::Excursion)
            .or_else(|_| LatticePath::new(steps, Ensemble::Bridge))
    }
}

/// Semi-lengths of the horizontal slices, one per matched step pair, in
/// order of the closing step. Arcs below the axis are reflected.
pub fn slice_semilengths(path: &LatticePath) -> Vec<usize> {
    matched_pairs(&path.steps)
        .into_iter()
        .map(|(i, j)| (j - i - 1) / 2)
        .collect()
}

fn matched_pairs(steps: &[i8]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(steps.len() / 2);
    let mut stack = Vec::new();
    let mut h = 0i64;
    let mut sign = 1i8;
    for (i, &s) in steps.iter().enumerate() {
        if h == 0 {
            sign = s;
        }
        if s == sign {
            stack.push(i);
        } else {
            out.push((stack.pop().expect("balanced"), i));
        }
        h += s as i64;
    }
    out
}

/// `Σ_m (ω(m) - ε)` over the slice semi-lengths.
pub fn statistic_with<S: Scalar>(path: &LatticePath, omega: &[S], eps: &S) -> S {
    let mut acc = S::zero(eps.ctx());
    for m in slice_semilengths(path) {
        acc = acc.add(&omega[m].sub(eps));
    }
    acc
}

/// The deformed area `A_(ω, ε)(w)`.
pub fn statistic(path: &LatticePath, cost: &CostFunction, eps: &Number, prec: u32) -> Result<Number> {
    let n = path.n().max(1);
    if cost.is_rational() {
        if let Some(e) = eps.as_rat() {
            let omega = cost.table::<Rat>(n, (), prec)?;
            return Ok(Number::Exact(statistic_with(path, &omega, e)));
        }
    }
    let omega = cost.table::<Real>(n, prec, prec)?;
    Ok(Number::Approx(statistic_with(path, &omega, &eps.to_real(prec))))
}

/// All excursions or bridges of semi-length `n`, in lexicographic order
/// with `+` before `-`.
pub fn enumerate_paths(n: usize, ensemble: Ensemble) -> Result<PathIter> {
    let cap = match ensemble {
        Ensemble::Excursion => EXCURSION_ENUM_CAP,
        Ensemble::Bridge => BRIDGE_ENUM_CAP,
    };
    if n > cap {
        return Err(Error::CapExceeded {
            what: "path enumeration N",
            value: n,
            cap,
        });
    }
    // bit (2n-1-i) set means step i is `-`; the smallest mask puts all
    // `-` steps last
    Ok(PathIter {
        n,
        ensemble,
        mask: if n == 0 { Some(0) } else { Some((1u64 << n) - 1) },
    })
}

pub struct PathIter {
    n: usize,
    ensemble: Ensemble,
    mask: Option<u64>,
}

impl PathIter {
    fn decode(&self, mask: u64) -> Vec<i8> {
        let len = 2 * self.n;
        (0..len).map(|i| if mask >> (len - 1 - i) & 1 == 1 { -1 } else { 1 }).collect()
    }

    fn advance(&mut self, mask: u64) {
        let len = 2 * self.n;
        if mask == 0 {
            self.mask = None;
            return;
        }
        // next mask with the same popcount (Gosper)
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        let next = (((r ^ mask) >> 2) / c) | r;
        self.mask = (next < 1u64 << len).then_some(next);
    }
}

impl Iterator for PathIter {
    type Item = LatticePath;
    fn next(&mut self) -> Option<LatticePath> {
        while let Some(mask) = self.mask {
            self.advance(mask);
            let steps = self.decode(mask);
            if self.ensemble == Ensemble::Excursion {
                let mut h = 0i64;
                if steps.iter().any(|&s| {
                    h += s as i64;
                    h < 0
                }) {
                    continue;
                }
            }
            return Some(LatticePath::from_steps_unchecked(steps, self.ensemble));
        }
        None
    }
}

/// `M_s(N)` for `s = 0..=s_max` by summing over all paths.
pub fn brute_force_moments<S: Scalar>(
    n: usize,
    ensemble: Ensemble,
    omega: &[S],
    eps: &S,
    s_max: usize,
) -> Result<Vec<S>> {
    let ctx = eps.ctx();
    let mut sums = vec![S::zero(ctx); s_max + 1];
    let mut count = 0i64;
    for path in enumerate_paths(n, ensemble)? {
        let a = statistic_with(&path, omega, eps);
        let mut pw = S::one(ctx);
        for slot in sums.iter_mut() {
            *slot = slot.add(&pw);
            pw = pw.mul(&a);
        }
        count += 1;
    }
    Ok(sums.into_iter().map(|x| x.div_i64(count)).collect())
}

/// `M_s(N)` for `0 ≤ s ≤ s_max`, `0 ≤ N ≤ N_max`.
#[derive(Clone, Debug)]
pub struct FiniteNTable {
    pub ensemble: Ensemble,
    pub cost: CostFunction,
    pub eps: Number,
    pub s_max: usize,
    pub n_max: usize,
    /// `values[s][N]`.
    pub values: Vec<Vec<Number>>,
}

impl FiniteNTable {
    pub fn get(&self, s: usize, n: usize) -> &Number {
        &self.values[s][n]
    }

    pub fn is_exact(&self) -> bool {
        self.values[0][0].is_exact()
    }
}

/// Normalized first-return DP.
///
/// With `f_{s,N} = 4^-N Σ_{w ∈ C_N} A(w)^s/s!` and `w_m = ω(m) - ε`,
/// `f_{s,N} = 1/4 Σ_m Σ_{s1+s2+s3=s} f_{s1,N-1-m} f_{s2,m} w_m^s3/s3!`.
/// Bridges decompose by their first arc, which may lie on either side,
/// giving the factor `2/4` and `g_{0,0} = 1`. Returns `M_s(N)` as `[s][N]`.
pub fn dp_moments<S: Scalar>(
    ensemble: Ensemble,
    omega: &[S],
    eps: &S,
    n_max: usize,
    s_max: usize,
) -> Result<Vec<Vec<S>>> {
    if n_max > DP_N_CAP {
        return Err(Error::CapExceeded {
            what: "DP N_max",
            value: n_max,
            cap: DP_N_CAP,
        });
    }
    if s_max > DP_S_CAP {
        return Err(Error::CapExceeded {
            what: "DP s_max",
            value: s_max,
            cap: DP_S_CAP,
        });
    }
    if omega.len() < n_max {
        return Err(Error::InvalidArgument(format!(
            "need ω(0..{}), got {} values",
            n_max.saturating_sub(1),
            omega.len()
        )));
    }
    let ctx = eps.ctx();
    let inv_fact: Vec<S> = (0..=s_max)
        .map(|k| S::from_rat(ctx, &Rat::from(factorial(k as u32)).recip()))
        .collect();
    let quarter = S::from_rat(ctx, &Rat::from((1, 4)));
    // f[N][s] for excursions; g[N][s] = Σ_{s2+s3=s} f_{s2,N} w_N^s3/s3!
    let mut f: Vec<Vec<S>> = Vec::with_capacity(n_max + 1);
    let mut g: Vec<Vec<S>> = Vec::with_capacity(n_max + 1);
    let mut bridge: Vec<Vec<S>> = Vec::new();
    let push_g = |f_n: &[S], n: usize, g: &mut Vec<Vec<S>>| {
        if n >= omega.len() {
            return;
        }
        let wm = omega[n].sub(eps);
        let mut pows = vec![S::one(ctx)];
        for k in 1..=s_max {
            pows.push(pows[k - 1].mul(&wm));
        }
        let row = (0..=s_max)
            .map(|t| {
                let mut acc = S::zero(ctx);
                for s3 in 0..=t {
                    acc.add_mul(&f_n[t - s3], &pows[s3].mul(&inv_fact[s3]));
                }
                acc
            })
            .collect();
        g.push(row);
    };
    let mut row0 = vec![S::zero(ctx); s_max + 1];
    row0[0] = S::one(ctx);
    push_g(&row0, 0, &mut g);
    f.push(row0.clone());
    if ensemble == Ensemble::Bridge {
        bridge.push(row0);
    }
    for n in 1..=n_max {
        let step = |prev: &[Vec<S>]| -> Vec<S> {
            (0..=s_max)
                .map(|s| {
                    let mut acc = S::zero(ctx);
                    for m in 0..n {
                        let left = &prev[n - 1 - m];
                        let right = &g[m];
                        for s1 in 0..=s {
                            if left[s1].is_zero() {
                                continue;
                            }
                            acc.add_mul(&left[s1], &right[s - s1]);
                        }
                    }
                    acc.mul(&quarter)
                })
                .collect()
        };
        let row = step(&f);
        if ensemble == Ensemble::Bridge {
            let b = step(&bridge).into_iter().map(|x| x.mul_i64(2)).collect();
            bridge.push(b);
        }
        if n < n_max {
            push_g(&row, n, &mut g);
        }
        f.push(row);
    }
    let table = if ensemble == Ensemble::Bridge { &bridge } else { &f };
    let mut out = vec![Vec::with_capacity(n_max + 1); s_max + 1];
    for row in table {
        for s in 0..=s_max {
            let fact = S::from_rat(ctx, &Rat::from(factorial(s as u32)));
            out[s].push(row[s].mul(&fact).div(&row[0]));
        }
    }
    Ok(out)
}

/// Exact when the cost is rational and `ε` is exact, real at `prec` bits
/// otherwise.
pub fn exact_moment_dp(
    ensemble: Ensemble,
    cost: &CostFunction,
    eps: &Number,
    n_max: usize,
    s_max: usize,
    prec: u32,
) -> Result<FiniteNTable> {
    let values = if let (true, Some(e)) = (cost.is_rational(), eps.as_rat()) {
        let omega = cost.table::<Rat>(n_max, (), prec)?;
        dp_moments(ensemble, &omega, e, n_max, s_max)?
            .into_iter()
            .map(|r| r.into_iter().map(Number::Exact).collect())
            .collect()
    } else {
        let omega = cost.table::<Real>(n_max, prec, prec)?;
        dp_moments(ensemble, &omega, &eps.to_real(prec), n_max, s_max)?
            .into_iter()
            .map(|r| r.into_iter().map(Number::Approx).collect())
            .collect()
    };
    Ok(FiniteNTable {
        ensemble,
        cost: cost.clone(),
        eps: eps.clone(),
        s_max,
        n_max,
        values,
    })
}

/// `d_s(N) = M_s(N)/N^(s(p+1/2)) - M̄_s` at selected `N`, with a fitted
/// power-law decay exponent.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub s: usize,
    pub target: Real,
    pub deviations: Vec<(usize, Real)>,
    /// `-d ln|d_s| / d ln N` fitted over the top decade; `None` for `s = 0`
    /// or when a deviation vanishes there.
    pub exponent: Option<f64>,
    /// Predicted error exponent, see [`error_exponent`].
    pub expected: f64,
}

/// Error exponent `η_s` of `M_s(N)/N^(s(p+1/2)) → M̄_s` for a cost with
/// `ω(N) = N^p (1 + O(N^-η))`: 1 at `s = 0`, `min(η, 1/2)` for excursions
/// at `s = 1`, and `min(η, p, 1/2)` otherwise. For bridges at `s = 1` the
/// constant regular part of `E_1` enters `B_1` through `(1-z)^-1`, which
/// costs a relative `(1-z)^p`.
pub fn error_exponent(ensemble: Ensemble, s: usize, eta: f64, p: f64) -> f64 {
    match (s, ensemble) {
        (0, _) => 1.0,
        (1, Ensemble::Excursion) => eta.min(0.5),
        _ => eta.min(p).min(0.5),
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub ensemble: Ensemble,
    pub p: Rat,
    pub rows: Vec<ConvergenceRow>,
}

/// Sample points used for the report: powers of two, plus a log-spaced
/// grid over `[N_max/10, N_max]` for the exponent fit.
fn report_points(n_max: usize) -> (Vec<usize>, Vec<usize>) {
    let mut pts: Vec<usize> = (0..).map(|k| 1usize << k).take_while(|&n| n <= n_max).collect();
    let lo = (n_max / 10).max(1);
    let mut fit = Vec::new();
    let k = 16;
    for i in 0..=k {
        let x = (lo as f64).ln() + (n_max as f64 / lo as f64).ln() * i as f64 / k as f64;
        fit.push((x.exp().round() as usize).clamp(lo, n_max));
    }
    fit.dedup();
    pts.extend(fit.iter().copied());
    pts.sort_unstable();
    pts.dedup();
    (pts, fit)
}

pub fn rescaled_convergence(table: &FiniteNTable, prec: u32) -> Result<ConvergenceReport> {
    let p = table.cost.p().clone();
    let targets = rescaled_moments(table.ensemble, &p, table.s_max, prec)?;
    let q = Real::from_rat(prec, &Rat::from(&p + Rat::from((1, 2))));
    let (pts, fit) = report_points(table.n_max);
    let mut rows = Vec::new();
    for s in 0..=table.s_max {
        let target = targets[s].to_real(prec);
        let dev = |n: usize| -> Real {
            let scale = Real::from_int(prec, n as i64).powf(&(&q * s as i64));
            table.get(s, n).to_real(prec) / scale - &target
        };
        let deviations = pts.iter().filter(|&&n| n > 0).map(|&n| (n, dev(n))).collect();
        let exponent = if s == 0 || fit.len() < 3 {
            None
        } else {
            let pairs: Vec<(f64, f64)> = fit
                .iter()
                .filter(|&&n| n > 0)
                .map(|&n| ((n as f64).ln(), dev(n).abs()))
                .filter(|(_, d)| !d.is_zero())
                .map(|(x, d)| (x, d.ln().to_f64()))
                .collect();
            (pairs.len() == fit.len()).then(|| -slope(&pairs))
        };
        rows.push(ConvergenceRow {
            s,
            target,
            deviations,
            exponent,
            expected: error_exponent(table.ensemble, s, table.cost.eta(), p.to_f64()),
        });
    }
    Ok(ConvergenceReport {
        ensemble: table.ensemble,
        p,
        rows,
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Hook lengths of the plane tree in bijection with an excursion: each
/// up step is a vertex whose hook is one plus the number of up steps it
/// encloses. Checks `{ℓ} = {2h - 1}` against the slices.
pub fn path_to_tree_hooks(path: &LatticePath) -> Result<Vec<usize>> {
    if path.ensemble() != Ensemble::Excursion {
        return Err(Error::MalformedPath("hooks need an excursion".into()));
    }
    let pairs = matched_pairs(path.steps());
    let mut hooks: Vec<usize> = pairs.iter().map(|&(i, j)| (j - i + 1) / 2).collect();
    let mut from_slices: Vec<usize> = slice_semilengths(path).into_iter().map(|m| 2 * m + 1).collect();
    let mut lens: Vec<usize> = hooks.iter().map(|h| 2 * h - 1).collect();
    lens.sort_unstable();
    from_slices.sort_unstable();
    if lens != from_slices {
        return Err(Error::Mismatch("slice lengths differ from 2h - 1".into()));
    }
    hooks.sort_unstable_by(|a, b| b.cmp(a));
    Ok(hooks)
}
