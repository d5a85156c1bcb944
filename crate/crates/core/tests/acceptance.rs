//! One line per acceptance criterion. Exits nonzero if a criterion fails
//! that is not in `KNOWN_FAILURES`, or passes that is.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pairy::costs::CostFunction;
use pairy::moments::{
    airy_moment, bound_constants_bridge_safe, bound_margins, carleman_fit, limit_half_moments, mu_excursion,
    takacs_k, tau_log, tau_log_coefficients, tau_log_convolution, verify_bounds, Ensemble, MomentTable,
    DEFAULT_DELTAS,
};
use pairy::numerics::{rel_diff, Constants, Number, Rat, Real};
use pairy::oracle::{brute_force_moments, dp_moments, exact_moment_dp, rescaled_convergence};
use pairy::refdist::{airy_density_moment, AiryCdf, DYCK_SCALE};
use pairy::sampler::{compare_to_reference, ks_distance, run_experiment, ExperimentConfig};
use pairy::trees::{check_mu_equals_tree_sum, check_xy_identity};
use pairy::Result;

// tolerances
const SHIFT_TOL: f64 = 1e-40;
const TABLE3_REL: f64 = 1e-4;
const TREE_TOL: f64 = 1e-25;
const EXPONENT_WINDOW: f64 = 0.15;
const ALPHA_REL: f64 = 1e-8;
const Z_MAX: f64 = 4.0;
const MASS_TOL: f64 = 1e-6;
const AIRY_MOMENT_TOL: f64 = 1e-5;
const KS_MAX: f64 = 0.01;
const TAU_TOL: f64 = 1e-30;
const LOG_RATIO_REL: f64 = 0.15;

/// Criteria that fail for reasons analysed in the README. A change in
/// either direction makes the run fail.
const KNOWN_FAILURES: [usize; 4] = [6, 8, 10, 11];

struct Outcome {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail, info: Vec::new() }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::from((n, d))
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn c1() -> Result<Outcome> {
    let t = Instant::now();
    let mu = mu_excursion(&Rat::from(1), 30, 256)?;
    let k = takacs_k(30);
    let el = t.elapsed();
    let bad: Vec<usize> = (0..=30).filter(|&s| mu[s].as_rat() != Some(&k[s])).collect();
    let pass = bad.is_empty() && el < Duration::from_secs(1);
    Ok(outcome(pass, format!("mu(1) = K_s exactly for s <= 30, mismatches {bad:?}, {}", secs(el))))
}

fn c2() -> Result<Outcome> {
    let mut worst = 0f64;
    for p in [r(1, 10), r(1, 4), r(3, 4), r(1, 1), r(3, 2), r(5, 2)] {
        let t = MomentTable::new(Ensemble::Excursion, &p, 2, 256)?;
        worst = worst.max(t.shifted[1].abs().to_f64());
    }
    Ok(outcome(worst <= SHIFT_TOL, format!("max |<x_p - t(p)>| = {worst:.3e}")))
}

fn c3() -> Result<Outcome> {
    let t = Instant::now();
    let d: Vec<Rat> = DEFAULT_DELTAS.iter().map(|&x| Rat::from(x)).collect();
    let v = limit_half_moments(5, &d, 256)?;
    let el = t.elapsed();
    let want = [(2, 0.610375), (3, 0.266217), (4, 1.28827), (5, 1.73555)];
    let mut pass = el < Duration::from_secs(60);
    let mut got = Vec::new();
    for (s, w) in want {
        let x = v[s].value.to_f64();
        pass &= (x / w - 1.0).abs() <= TABLE3_REL;
        got.push(format!("{x:.6}"));
    }
    Ok(outcome(pass, format!("s = 2..5: {}, {}", got.join(" "), secs(el))))
}

fn c4() -> Result<Outcome> {
    let mut worst = 0f64;
    let mut err = None;
    for p in [r(1, 4), r(3, 4), r(1, 1), r(2, 1)] {
        match check_mu_equals_tree_sum(8, &p, TREE_TOL, 256).and_then(|a| Ok((a, check_xy_identity(8, &p, TREE_TOL, 256)?))) {
            Ok((a, b)) => worst = worst.max(a.max_deviation.to_f64()).max(b.max_deviation.to_f64()),
            Err(e) => err = Some(format!("p = {p}: {e}")),
        }
    }
    Ok(match err {
        Some(e) => outcome(false, e),
        None => outcome(true, format!("tree sums and Y = X + Y^2 through order 8, max rel dev {worst:.2e}")),
    })
}

fn c5() -> Result<Outcome> {
    let t = Instant::now();
    let costs = [CostFunction::power_half(Rat::from(1))?, CostFunction::power_one(Rat::from(2))?];
    let mut bad = Vec::new();
    let mut cells = 0;
    for cost in &costs {
        let omega = cost.table::<Rat>(10, (), 64)?;
        for eps in [Rat::new(), r(1, 3)] {
            for e in [Ensemble::Excursion, Ensemble::Bridge] {
                let dp = dp_moments(e, &omega, &eps, 10, 4)?;
                for n in 0..=10 {
                    let bf = brute_force_moments(n, e, &omega, &eps, 4)?;
                    for s in 0..=4 {
                        cells += 1;
                        if bf[s] != dp[s][n] {
                            bad.push(format!("{} {e} eps={eps} N={n} s={s}", cost.id()));
                        }
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let pass = bad.is_empty() && el < Duration::from_secs(120);
    Ok(outcome(pass, format!("{cells} cells compared, {} mismatches {:?}, {}", bad.len(), bad.first(), secs(el))))
}

fn c6() -> Result<Outcome> {
    let prec = 128;
    let mut pass = true;
    let mut cells = Vec::new();
    for p in [r(1, 4), Rat::from(1)] {
        let cost = CostFunction::gamma_ratio(r(1, 2), p.clone())?;
        let eps = Number::Approx(cost.alpha(1e-20, prec)?.value);
        for e in [Ensemble::Excursion, Ensemble::Bridge] {
            let t = exact_moment_dp(e, &cost, &eps, 4096, 4, prec)?;
            let rep = rescaled_convergence(&t, prec)?;
            for row in rep.rows.iter().filter(|r| (1..=4).contains(&r.s)) {
                let first = row.deviations.iter().find(|d| d.0 == 64).map(|d| d.1.abs().to_f64());
                let last = row.deviations.last().map(|d| d.1.abs().to_f64());
                let shrinks = matches!((first, last), (Some(a), Some(b)) if b < a);
                let ok = shrinks && row.exponent.is_some_and(|x| (x - row.expected).abs() <= EXPONENT_WINDOW);
                pass &= ok;
                cells.push(format!(
                    "p={p} {} s={} fit {} want {:.2}{}",
                    e.name(),
                    row.s,
                    row.exponent.map_or("-".into(), |x| format!("{x:.2}")),
                    row.expected,
                    if ok { "" } else { " FAIL" }
                ));
            }
        }
    }
    Ok(Outcome { pass, detail: "fitted decay exponents at N = 4096".into(), info: cells })
}

fn c7() -> Result<Outcome> {
    let prec = 128;
    let grid = [r(1, 10), r(3, 10), r(3, 4), r(1, 1), r(3, 2), r(5, 2)];
    // ω^(1), ω^(2) have poles at 3/2 and 5/2
    let shifted = [r(1, 10), r(3, 10), r(3, 4), r(1, 1), r(5, 4), r(9, 4)];
    let families = [
        (CostFunction::gamma_ratio(r(1, 2), Rat::from(1))?, &grid),
        (CostFunction::gamma_ratio(Rat::from(1), Rat::from(1))?, &shifted),
        (CostFunction::gamma_ratio(Rat::from(2), Rat::from(1))?, &shifted),
        (CostFunction::gamma_ratio_32(r(5, 2), Rat::from(1))?, &grid),
    ];
    let mut pass = true;
    let mut worst = 0f64;
    let mut info = Vec::new();
    for (base, ps) in &families {
        for p in ps.iter() {
            let c = base.with_p(p.clone())?;
            let a = c.alpha_closed_form(prec)?.value;
            let b = c.alpha_numeric(1e-12, prec)?.value;
            let d = if a.is_zero() { b.abs().to_f64() } else { rel_diff(&a, &b).to_f64() };
            let tol = if a.is_zero() { 1e-30 } else { ALPHA_REL };
            if d > tol {
                pass = false;
                info.push(format!("{} p={p}: rel diff {d:.2e}", c.id()));
            }
            if !a.is_zero() {
                worst = worst.max(d);
            }
        }
        if std::ptr::eq(*ps, &shifted) {
            for p in [r(3, 2), r(5, 2)] {
                let c = base.with_p(p.clone())?;
                let poles = c.alpha_closed_form(prec).is_err_and(|e| e.is_numeric())
                    && c.alpha_numeric(1e-12, prec).is_err_and(|e| e.is_numeric());
                pass &= poles;
                info.push(format!("{} p={p}: pole reported by both routes: {poles}", c.id()));
            }
        }
    }
    let want = -(Constants::get(prec).sqrt_pi.clone() * 2i64).recip();
    let mut res = Vec::new();
    for (n, d) in [(1, 1000), (-1, 1000), (1, 10000), (-1, 10000)] {
        let delta = r(n, d);
        let c = CostFunction::gamma_ratio(r(1, 2), Rat::from(&delta + r(1, 2)))?;
        for a in [c.alpha_closed_form(prec)?.value, c.alpha_numeric(1e-12, prec)?.value] {
            let x = a * Real::from_rat(prec, &delta);
            // (p - 1/2)α = -Γ(p + 1/2)/(2√π) = -(1 - γδ + ...)/(2√π)
            let dev = rel_diff(&x, &want).to_f64();
            let ok = dev <= 2.0 * (n as f64 / d as f64).abs();
            pass &= ok;
            res.push(format!("{dev:.1e}"));
        }
    }
    info.push(format!("residue (p-1/2)α vs -1/(2√π), closed/numeric rel dev at δ=±1e-3,±1e-4: {}", res.join(" ")));
    Ok(Outcome { pass, detail: format!("four families, max rel diff {worst:.2e}"), info })
}

fn c8() -> Result<Outcome> {
    let prec = 256;
    let mut pass = true;
    let mut info = Vec::new();
    for p in [r(1, 10), r(1, 4), r(3, 4), Rat::from(1), Rat::from(2), Rat::from(5)] {
        let rep = verify_bounds(&p, 40, prec);
        let line = match &rep {
            Ok(_) => "bounds hold".to_string(),
            Err(e) => {
                pass = false;
                format!("FAIL {e}")
            }
        };
        let safe = bound_margins(&p, 40, bound_constants_bridge_safe(&p, prec)?, prec)?;
        let safe_ok = safe.first_violation().is_none();
        let mut fits = Vec::new();
        for e in [Ensemble::Excursion, Ensemble::Bridge] {
            let f = carleman_fit(e, &p, 40, prec)?;
            let ok = f.a <= 0.5 + 0.05;
            pass &= ok;
            fits.push(format!("{} s ln s coeff {:.3}", e.name(), f.a));
        }
        info.push(format!("p={p}: {line}; corrected bridge constants hold: {safe_ok}; {}", fits.join(", ")));
    }
    Ok(Outcome { pass, detail: "derived constants, s <= 40, both ensembles".into(), info })
}

fn c9() -> Result<Outcome> {
    let t = Instant::now();
    let n = 100;
    let cost = CostFunction::gamma_ratio(r(1, 2), Rat::from(1))?;
    let eps = Number::Approx(cost.alpha(1e-20, 128)?.value);
    let mut pass = true;
    let mut zs = Vec::new();
    let mut replay = true;
    for (i, e) in [Ensemble::Excursion, Ensemble::Bridge].into_iter().enumerate() {
        let mut c = ExperimentConfig::new(e, n, 1_000_000, cost.clone());
        c.eps = eps.clone();
        c.s_max = 3;
        c.rescale_exponent = 1.5;
        c.seed = 100 + i as u64;
        let s = run_experiment(&c)?;
        let tab = exact_moment_dp(e, &cost, &eps, n, 3, 128)?;
        let scale = (n as f64).powf(-1.5);
        let refs: Vec<f64> = (1..=3).map(|k| tab.get(k, n).to_f64() * scale.powi(k as i32)).collect();
        for z in compare_to_reference(&s, &refs)? {
            pass &= z.z.abs() <= Z_MAX;
            zs.push(format!("{}:{:+.2}", e.name(), z.z));
        }
        if i == 0 {
            c.threads = 3;
            let again = run_experiment(&c)?;
            replay = again.values == s.values && again.moments == s.moments;
        }
    }
    let el = t.elapsed();
    pass &= replay && el < Duration::from_secs(300);
    Ok(outcome(pass, format!("z for s=1..3 {}; replay identical: {replay}; {}", zs.join(" "), secs(el))))
}

fn c10() -> Result<Outcome> {
    let mut pass = true;
    let mass = (airy_density_moment(0, 1e-12, 64)? - 1i64).to_f64();
    pass &= mass.abs() <= MASS_TOL;
    let mut ms = Vec::new();
    for s in 1..=4u32 {
        let q = airy_density_moment(s, 1e-12, 64)?;
        let d = (q - airy_moment(s as usize, 64)?).abs().to_f64();
        pass &= d <= AIRY_MOMENT_TOL;
        ms.push(format!("{d:.1e}"));
    }
    let cdf = AiryCdf::new(3.5, 448, 64)?;
    let cost = CostFunction::power_half(Rat::from(1))?;
    // ω(k) - 1/2 = k: the plain area
    let ks_at = |n: usize| -> Result<f64> {
        let mut c = ExperimentConfig::new(Ensemble::Excursion, n, 100_000, cost.clone());
        c.eps = Number::Exact(r(-1, 2));
        c.rescale_exponent = 1.5;
        c.seed = 1;
        let s = run_experiment(&c)?;
        Ok(ks_distance(&s.sorted_values(), |x| cdf.scaled_cdf(x, DYCK_SCALE)))
    };
    let ks = ks_at(2000)?;
    pass &= ks <= KS_MAX;
    let info = vec![
        format!("KS at N = 8000 (informational): {:.4}", ks_at(8000)?),
        format!("KS at N = 32000 (informational): {:.4}", ks_at(32000)?),
    ];
    Ok(Outcome {
        pass,
        detail: format!("∫f - 1 = {mass:.1e}; |moment dev| s=1..4 {}; KS(N=2000, n=1e5) = {ks:.4}", ms.join(" ")),
        info,
    })
}

fn c11() -> Result<Outcome> {
    let prec = 256;
    let exact = tau_log_coefficients(20) == tau_log_convolution(20);
    // independent real-valued recursion with τ_2 = γ_E/4
    let g = Constants::get(prec).euler_gamma.clone();
    let mut t = vec![Real::zero(prec); 21];
    t[2] = g / 4i64;
    for s in 3..=20 {
        let mut v = Real::zero(prec);
        for k in 2..=s - 2 {
            v += &t[k] * &t[s - k];
        }
        t[s] = v / 2i64;
    }
    let closed = tau_log(20, prec);
    let num = (2..=20).map(|s| (&closed[s] - &t[s]).abs().to_f64()).fold(0f64, f64::max);
    let mut pass = exact && num <= TAU_TOL;

    let cost = CostFunction::log_shift();
    let eps = Number::Approx(cost.alpha(1e-20, 128)?.value);
    let n = 4096;
    let tab = exact_moment_dp(Ensemble::Excursion, &cost, &eps, n, 2, 128)?;
    let d = n as f64 * (n as f64).ln();
    let m1 = tab.get(1, n).to_f64();
    let m2 = tab.get(2, n).to_f64();
    let ge = Constants::get(64).euler_gamma.to_f64();
    let ratio = m2 / d;
    pass &= (ratio / ge - 1.0).abs() <= LOG_RATIO_REL;
    let mut trend = Vec::new();
    for k in [256usize, 1024, 4096] {
        let dk = k as f64 * (k as f64).ln();
        trend.push(format!("N={k}: {:.4}", tab.get(2, k).to_f64() / dk));
    }
    Ok(Outcome {
        pass,
        detail: format!(
            "τ exact through ℓ = 10: {exact}, numeric dev {num:.1e}; M_2(N)/(N ln N) at N = 4096 = {ratio:.4} vs γ_E {ge:.4}"
        ),
        info: vec![
            format!("variance (M_2 - M_1^2)/(N ln N) = {:.4}", (m2 - m1 * m1) / d),
            format!("M_2/(N ln N) trend: {}", trend.join(", ")),
        ],
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("takacs", c1),
        ("canonical shift", c2),
        ("p = 1/2 table", c3),
        ("tree expansion", c4),
        ("dp vs brute force", c5),
        ("finite-N convergence", c6),
        ("alpha routes", c7),
        ("growth bounds", c8),
        ("monte carlo", c9),
        ("airy reference", c10),
        ("log case", c11),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let t = Instant::now();
        let o = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&k);
        let note = if known && !o.pass { " (known failure)" } else { "" };
        println!("criterion {k:>2} [{tag}]{note} {name}: {} ({})", o.detail, secs(t.elapsed()));
        for line in &o.info {
            println!("    {line}");
        }
        if !o.pass {
            failed.push(k);
        }
        if o.pass == known {
            unexpected.push(k);
        }
    }
    println!("failed criteria: {failed:?}");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("outcome differs from the known-failure list for: {unexpected:?}");
        ExitCode::FAILURE
    }
}
