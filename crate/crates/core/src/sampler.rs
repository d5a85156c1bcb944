//! Monte Carlo: uniform excursions and bridges, empirical moments and
//! histograms of the rescaled deformed area.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; chain
//! `c` uses stream `c` of that key. Draws are split over a fixed number of
//! chains and merged in chain order, so a summary depends only on the seed,
//! the configuration and the chain count.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::costs::CostFunction;
use crate::error::{Error, Result};
use crate::moments::Ensemble;
use crate::numerics::{Number, Real};
use crate::oracle::LatticePath;

pub const SCHEMA_VERSION: u32 = 1;
/// Largest semi-length accepted by [`run_experiment`].
pub const SAMPLE_N_CAP: usize = 1 << 20;
/// Largest number of draws accepted by [`run_experiment`].
pub const SAMPLE_COUNT_CAP: usize = 50_000_000;
pub const DEFAULT_CHAINS: usize = 8;
const MAX_BINS: usize = 10_000;

/// Uniform over the `B_N` bridges: a shuffled multiset of `N` ups and
/// `N` downs.
pub fn sample_bridge<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LatticePath {
    let mut steps = Vec::with_capacity(2 * n);
    fill_bridge(n, rng, &mut steps);
    LatticePath::from_steps_unchecked(steps, Ensemble::Bridge)
}

/// Uniform over the `C_N` excursions by the cycle lemma.
pub fn sample_excursion<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LatticePath {
    let mut steps = Vec::with_capacity(2 * n + 1);
    let mut out = Vec::with_capacity(2 * n);
    fill_excursion(n, rng, &mut steps, &mut out);
    LatticePath::from_steps_unchecked(out, Ensemble::Excursion)
}

pub fn sample_path<R: Rng + ?Sized>(ensemble: Ensemble, n: usize, rng: &mut R) -> LatticePath {
    match ensemble {
        Ensemble::Excursion => sample_excursion(n, rng),
        Ensemble::Bridge => sample_bridge(n, rng),
    }
}

fn fill_bridge<R: Rng + ?Sized>(n: usize, rng: &mut R, steps: &mut Vec<i8>) {
    steps.clear();
    steps.resize(n, 1);
    steps.resize(2 * n, -1);
    steps.shuffle(rng);
}

// N+1 ups and N downs sum to +1; exactly one rotation, the one starting
// after the last minimum of the prefix sums, stays strictly positive.
fn fill_excursion<R: Rng + ?Sized>(n: usize, rng: &mut R, buf: &mut Vec<i8>, out: &mut Vec<i8>) {
    buf.clear();
    buf.resize(n + 1, 1);
    buf.resize(2 * n + 1, -1);
    buf.shuffle(rng);
    let mut h = 0i64;
    let mut min = 0i64;
    let mut start = 0usize;
    for (i, &s) in buf.iter().enumerate() {
        h += s as i64;
        if h <= min {
            min = h;
            start = i + 1;
        }
    }
    let start = start % buf.len();
    out.clear();
    out.extend_from_slice(&buf[start + 1..]);
    out.extend_from_slice(&buf[..start]);
}

// Same matching as the oracle's slice decomposition, without allocation.
fn deformed_area(steps: &[i8], omega: &[f64], eps: f64, stack: &mut Vec<usize>) -> f64 {
    stack.clear();
    let mut h = 0i64;
    let mut sign = 1i8;
    let mut acc = 0.0;
    for (i, &s) in steps.iter().enumerate() {
        if h == 0 {
            sign = s;
        }
        if s == sign {
            stack.push(i);
        } else {
            let j = stack.pop().expect("balanced");
            acc += omega[(i - j - 1) / 2] - eps;
        }
        h += s as i64;
    }
    acc
}

/// Bin-width rule for the histogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Binning {
    #[default]
    FreedmanDiaconis,
    Fixed(usize),
}

impl FromStr for Binning {
    type Err = Error;
    fn from_str(s: &str) -> Result<Binning> {
        match s {
            "fd" | "freedman-diaconis" | "auto" => Ok(Binning::FreedmanDiaconis),
            _ => match s.parse::<usize>() {
                Ok(k) if (1..=MAX_BINS).contains(&k) => Ok(Binning::Fixed(k)),
                _ => Err(Error::InvalidArgument(format!(
                    "bins must be `fd` or an integer in 1..={MAX_BINS}, got `{s}`"
                ))),
            },
        }
    }
}

impl fmt::Display for Binning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binning::FreedmanDiaconis => f.write_str("fd"),
            Binning::Fixed(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    /// `counts.len() + 1` increasing edges; the last bin is closed.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    fn build(sorted: &[f64], binning: Binning) -> Histogram {
        let n = sorted.len();
        if n == 0 {
            let bins = match binning {
                Binning::Fixed(k) => k,
                Binning::FreedmanDiaconis => 1,
            };
            let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
            return Histogram { edges, counts: vec![0; bins] };
        }
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let bins = match binning {
            Binning::Fixed(k) => k,
            Binning::FreedmanDiaconis => {
                let iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
                let h = 2.0 * iqr / (n as f64).cbrt();
                if h > 0.0 {
                    (((hi - lo) / h).ceil() as usize).clamp(1, MAX_BINS)
                } else {
                    1
                }
            }
        };
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        edges[bins] = hi;
        let mut counts = vec![0u64; bins];
        for &x in sorted {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Histogram { edges, counts }
    }

    /// `bin_left,bin_right,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.edges[i], self.edges[i + 1], c));
        }
        out
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    /// Semi-length `N`.
    pub n_steps: usize,
    pub samples: usize,
    pub cost: CostFunction,
    pub eps: Number,
    /// Values are divided by `N^rescale_exponent`.
    pub rescale_exponent: f64,
    pub seed: u64,
    pub binning: Binning,
    /// Highest empirical moment recorded.
    pub s_max: usize,
    pub chains: usize,
    /// At most this many chains run at once; 0 runs all of them. Does not
    /// affect the result.
    pub threads: usize,
}

impl ExperimentConfig {
    /// `ε = 0`, no rescaling, seed 0, four moments.
    pub fn new(ensemble: Ensemble, n_steps: usize, samples: usize, cost: CostFunction) -> Self {
        ExperimentConfig {
            ensemble,
            n_steps,
            samples,
            cost,
            eps: Number::Exact(Default::default()),
            rescale_exponent: 0.0,
            seed: 0,
            binning: Binning::default(),
            s_max: 4,
            chains: DEFAULT_CHAINS,
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub schema_version: u32,
    pub ensemble: String,
    #[serde(rename = "N")]
    pub n_steps: usize,
    #[serde(rename = "n")]
    pub samples: usize,
    pub cost: String,
    pub eps: f64,
    pub rescale_exponent: f64,
    pub seed: u64,
    pub chains: usize,
    /// `m_1 .. m_{s_max}`.
    pub moments: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub histogram: Histogram,
    /// Rescaled values in draw order (chain by chain).
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl SampleSummary {
    /// Empirical variance, `n - 1` denominator.
    pub fn variance(&self) -> f64 {
        if self.samples < 2 {
            return 0.0;
        }
        let mean = self.values.iter().sum::<f64>() / self.samples as f64;
        let ss: f64 = self.values.iter().map(|x| (x - mean) * (x - mean)).sum();
        ss / (self.samples - 1) as f64
    }

    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Draws `config.samples` paths and summarizes
/// `(A_(ω,ε) - ...) / N^r`, where the `εN` centering is part of the
/// statistic.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SampleSummary> {
    let n = config.n_steps;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    if n > SAMPLE_N_CAP {
        return Err(Error::CapExceeded { what: "N", value: n, cap: SAMPLE_N_CAP });
    }
    if config.samples > SAMPLE_COUNT_CAP {
        return Err(Error::CapExceeded { what: "samples", value: config.samples, cap: SAMPLE_COUNT_CAP });
    }
    if config.chains == 0 {
        return Err(Error::InvalidArgument("chains must be >= 1".into()));
    }
    if !config.rescale_exponent.is_finite() {
        return Err(Error::InvalidArgument("rescale exponent must be finite".into()));
    }
    let prec = 64;
    let omega: Vec<f64> = config
        .cost
        .table::<Real>(n, prec, prec)?
        .iter()
        .map(Real::to_f64)
        .collect();
    let eps = config.eps.to_f64();
    let scale = (n as f64).powf(-config.rescale_exponent);

    let chains = config.chains;
    let per_chain = |c: usize| config.samples / chains + usize::from(c < config.samples % chains);
    let run_chain = |c: usize| -> Vec<f64> {
        let count = per_chain(c);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(c as u64);
        let mut buf = Vec::with_capacity(2 * n + 1);
        let mut steps = Vec::with_capacity(2 * n);
        let mut stack = Vec::with_capacity(n);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            match config.ensemble {
                Ensemble::Excursion => fill_excursion(n, &mut rng, &mut buf, &mut steps),
                Ensemble::Bridge => fill_bridge(n, &mut rng, &mut steps),
            }
            out.push(deformed_area(&steps, &omega, eps, &mut stack) * scale);
        }
        out
    };
    let batch = if config.threads == 0 { chains } else { config.threads.min(chains) };
    let mut parts: Vec<Vec<f64>> = Vec::with_capacity(chains);
    for first in (0..chains).step_by(batch) {
        let last = (first + batch).min(chains);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (first..last).map(|c| scope.spawn(move || run_chain(c))).collect();
            parts.extend(handles.into_iter().map(|h| h.join().expect("chain panicked")));
        });
    }
    let values: Vec<f64> = parts.into_iter().flatten().collect();
    Ok(summarize(config, values))
}

fn summarize(config: &ExperimentConfig, values: Vec<f64>) -> SampleSummary {
    let n = values.len();
    let mut moments = vec![0.0; config.s_max];
    let mut std_errors = vec![0.0; config.s_max];
    if n > 0 {
        for s in 1..=config.s_max {
            let mean = values.iter().map(|x| x.powi(s as i32)).sum::<f64>() / n as f64;
            moments[s - 1] = mean;
            if n > 1 {
                let ss: f64 = values
                    .iter()
                    .map(|x| {
                        let d = x.powi(s as i32) - mean;
                        d * d
                    })
                    .sum();
                std_errors[s - 1] = (ss / (n - 1) as f64 / n as f64).sqrt();
            }
        }
    }
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    SampleSummary {
        schema_version: SCHEMA_VERSION,
        ensemble: config.ensemble.name().to_string(),
        n_steps: config.n_steps,
        samples: n,
        cost: config.cost.id(),
        eps: config.eps.to_f64(),
        rescale_exponent: config.rescale_exponent,
        seed: config.seed,
        chains: config.chains,
        moments,
        std_errors,
        histogram: Histogram::build(&sorted, config.binning),
        values,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZScore {
    pub s: usize,
    pub empirical: f64,
    pub reference: f64,
    pub std_error: f64,
    pub z: f64,
}

/// `(m_s - reference_s)/stderr_s` for `s = 1..`; `reference[i]` is the
/// order `i + 1` value.
pub fn compare_to_reference(summary: &SampleSummary, reference: &[f64]) -> Result<Vec<ZScore>> {
    if reference.len() != summary.moments.len() {
        return Err(Error::OrderMismatch(summary.moments.len(), reference.len()));
    }
    Ok(summary
        .moments
        .iter()
        .zip(&summary.std_errors)
        .zip(reference)
        .enumerate()
        .map(|(i, ((&m, &se), &r))| {
            let d = m - r;
            let z = if d == 0.0 {
                0.0
            } else if se > 0.0 {
                d / se
            } else {
                d.signum() * f64::INFINITY
            };
            ZScore { s: i + 1, empirical: m, reference: r, std_error: se, z }
        })
        .collect())
}

/// Kolmogorov–Smirnov distance between the empirical law of `sorted` and
/// a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}
