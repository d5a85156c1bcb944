use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pairy::costs::{CostFunction, Family};
use pairy::moments::Ensemble;
use pairy::numerics::{default_precision, parse_rat, Rat, PRECISION_ENV};
use pairy::sampler::Binning;

#[derive(Parser, Debug)]
#[command(name = "pairy", version, about = "Moments of deformed areas of Dyck paths")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = PRECISION_ENV)]
    pub precision: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or_else(default_precision)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Limiting moments μ_s, rescaled and canonically shifted moments.
    Moments(MomentsArgs),
    /// The constant α(ω_p).
    Alpha(AlphaArgs),
    /// Exact finite-N moments from the first-return DP.
    FiniteN(FiniteNArgs),
    /// Monte Carlo over uniform excursions or bridges.
    Sample(SampleArgs),
    /// Tree-expansion identities.
    TreeCheck(TreeCheckArgs),
    /// Explicit growth bounds on μ_s and the Carleman fit.
    Bounds(BoundsArgs),
    /// Shifted moments at p = 1/2 by extrapolation.
    LimitHalf(LimitHalfArgs),
    /// The logarithmic cost ln(k+1).
    LogCase(LogCaseArgs),
    /// Area-Airy reference distribution.
    Airy(AiryArgs),
    /// Runs the cross-validation suite.
    VerifyAll(VerifyAllArgs),
}

fn rat(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("`{s}` is not a number or fraction"))
}

fn ensemble(s: &str) -> Result<Ensemble, String> {
    s.parse::<Ensemble>().map_err(|e| e.to_string())
}

fn binning(s: &str) -> Result<Binning, String> {
    s.parse::<Binning>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct CostArgs {
    /// Cost family: gamma-ratio, gamma-ratio-32, power-half, power-one,
    /// pure-power, log-shift.
    #[arg(long, default_value = "gamma-ratio")]
    pub family: String,
    /// Family parameter a (gamma-ratio families).
    #[arg(long, value_parser = rat, default_value = "1/2")]
    pub a: Rat,
    #[arg(long, value_parser = rat)]
    pub p: Option<Rat>,
}

impl CostArgs {
    pub fn cost(&self) -> pairy::Result<CostFunction> {
        let family = Family::from_name(&self.family, Some(self.a.clone()))?;
        if family == Family::LogShift {
            return Ok(CostFunction::log_shift());
        }
        let p = self.p.clone().ok_or_else(|| {
            pairy::Error::InvalidArgument(format!("cost family `{}` needs --p", self.family))
        })?;
        CostFunction::new(family, p)
    }
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[arg(long, value_parser = rat)]
    pub p: Rat,
    #[arg(long, value_parser = ensemble, default_value = "excursion")]
    pub ensemble: Ensemble,
    #[arg(long, default_value_t = 10)]
    pub smax: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphaMethodArg {
    Auto,
    Closed,
    Numeric,
    Both,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, value_enum, default_value_t = AlphaMethodArg::Auto)]
    pub method: AlphaMethodArg,
    /// Target relative error of the numeric route.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

/// `alpha` or a number.
#[derive(Clone, Debug)]
pub enum EpsArg {
    Alpha,
    Value(Rat),
}

fn eps(s: &str) -> Result<EpsArg, String> {
    if s == "alpha" {
        Ok(EpsArg::Alpha)
    } else {
        rat(s).map(EpsArg::Value)
    }
}

#[derive(Args, Debug)]
pub struct FiniteNArgs {
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, value_parser = ensemble, default_value = "excursion")]
    pub ensemble: Ensemble,
    /// Centering ε: `alpha` for α(ω_p), or a number.
    #[arg(long, value_parser = eps, default_value = "alpha")]
    pub eps: EpsArg,
    #[arg(long, default_value_t = 64)]
    pub nmax: usize,
    #[arg(long, default_value_t = 4)]
    pub smax: usize,
    /// Only print N divisible by this.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Report M_s(N)/N^(s(p+1/2)) against the limits instead of the table.
    #[arg(long)]
    pub convergence: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    None,
    /// Exact DP moments at the same N.
    Dp,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, value_parser = ensemble, default_value = "excursion")]
    pub ensemble: Ensemble,
    /// Semi-length N.
    #[arg(long = "n-steps", short = 'N', default_value_t = 100)]
    pub n_steps: usize,
    /// Number of draws.
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, value_parser = eps, default_value = "alpha")]
    pub eps: EpsArg,
    /// Divide by N^r; `auto` uses r = p + 1/2.
    #[arg(long, default_value = "auto")]
    pub rescale: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `fd` (Freedman–Diaconis) or a bin count.
    #[arg(long, value_parser = binning, default_value = "fd")]
    pub bins: Binning,
    #[arg(long, default_value_t = 4)]
    pub smax: usize,
    #[arg(long, default_value_t = pairy::sampler::DEFAULT_CHAINS)]
    pub chains: usize,
    #[arg(long, value_enum, default_value_t = Reference::None)]
    pub reference: Reference,
    /// Also write the histogram as CSV here.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TreeCheckArgs {
    #[arg(long, value_parser = rat)]
    pub p: Rat,
    #[arg(long, default_value_t = 8)]
    pub smax: usize,
    #[arg(long, default_value_t = 1e-25)]
    pub tol: f64,
    /// Also evaluate the p = 1/2 diagram sums for s = 1..=4 and compare
    /// with limit-half.
    #[arg(long)]
    pub half_point: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstantsArg {
    /// (A_p, R_p) as chosen in the derivation.
    Derived,
    /// (max(1/2, 2f), 1/2), valid for bridges too.
    Safe,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_parser = rat)]
    pub p: Rat,
    #[arg(long, default_value_t = 40)]
    pub smax: usize,
    #[arg(long, value_enum, default_value_t = ConstantsArg::Derived)]
    pub constants: ConstantsArg,
}

#[derive(Args, Debug)]
pub struct LimitHalfArgs {
    #[arg(long, default_value_t = 5)]
    pub smax: usize,
    /// Ladder of offsets δ from 1/2.
    #[arg(long, value_parser = rat, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    pub deltas: Vec<Rat>,
}

#[derive(Args, Debug)]
pub struct LogCaseArgs {
    #[arg(long, default_value_t = 10)]
    pub smax: usize,
    /// Also compute M_2(N)/(N ln N) by the DP up to this N.
    #[arg(long)]
    pub nmax: Option<usize>,
}

#[derive(Args, Debug)]
pub struct AiryArgs {
    #[command(subcommand)]
    pub what: AiryCommand,
}

#[derive(Subcommand, Debug)]
pub enum AiryCommand {
    /// Magnitudes a_k of the zeros of Ai.
    Zeros {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// f_Ai at the given points.
    Density {
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// E[exp(-λX)] at the given points.
    Laplace {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
    },
    /// Moments by quadrature of the density, against the exact values.
    Moments {
        #[arg(long, default_value_t = 4)]
        smax: u32,
    },
}

#[derive(Args, Debug)]
pub struct VerifyAllArgs {
    /// Use smaller sizes (seconds instead of minutes).
    #[arg(long)]
    pub quick: bool,
}
