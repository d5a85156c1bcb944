use std::fs;

use pairy::costs::CostFunction;
use pairy::moments::{
    self, airy_moment, bound_constants, bound_constants_bridge_safe, bound_margins, carleman_fit,
    gaussian_log_moments, limit_half_moments, tau_log, tau_log_coefficients, tau_log_convolution,
    Ensemble, MomentTable,
};
use pairy::numerics::{Constants, Number, Rat, Real};
use pairy::oracle::{brute_force_moments, exact_moment_dp, rescaled_convergence};
use pairy::refdist::{self, airy_density_moment, airy_laplace, AiryTables, LAPLACE_TERM_CAP};
use pairy::sampler::{compare_to_reference, run_experiment, ExperimentConfig};
use pairy::trees::{check_a_of_x, check_mu_equals_tree_sum, check_xy_identity, half_point_diagrams};
use pairy::{Error, Result};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::*;

const ALPHA_TOL: f64 = 1e-15;

fn head(command: &str, prec: u32) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("precision".into(), json!(prec));
    m
}

fn resolve_eps(eps: &EpsArg, cost: &CostFunction, prec: u32) -> Result<Number> {
    match eps {
        EpsArg::Value(r) => Ok(Number::Exact(r.clone())),
        EpsArg::Alpha => Ok(Number::Approx(cost.alpha(ALPHA_TOL, prec)?.value)),
    }
}

pub fn moments(a: &MomentsArgs, prec: u32) -> Result<Report> {
    let t = MomentTable::new(a.ensemble, &a.p, a.smax, prec)?;
    let mut m = head("moments", prec);
    m.insert("p".into(), json!(rat(&a.p)));
    m.insert("ensemble".into(), json!(a.ensemble.name()));
    m.insert("s_max".into(), json!(a.smax));
    m.insert("mu".into(), json!(t.mu.iter().map(|x| num(x, prec)).collect::<Vec<_>>()));
    m.insert("mu_decimal".into(), json!(t.mu.iter().map(|x| num_dec(x, prec)).collect::<Vec<_>>()));
    m.insert("rescaled".into(), json!(t.rescaled.iter().map(|x| num(x, prec)).collect::<Vec<_>>()));
    m.insert(
        "rescaled_decimal".into(),
        json!(t.rescaled.iter().map(|x| num_dec(x, prec)).collect::<Vec<_>>()),
    );
    m.insert("shift_t".into(), json!(num(&t.shift_t, prec)));
    m.insert("shifted".into(), json!(t.shifted.iter().map(|x| dec(x, prec)).collect::<Vec<_>>()));
    let mut csv = String::from("s,mu,mu_decimal,rescaled,shifted\n");
    for s in 0..=a.smax {
        csv_line(
            &mut csv,
            [s.to_string(), num(&t.mu[s], prec), num_dec(&t.mu[s], prec), num_dec(&t.rescaled[s], prec), dec(&t.shifted[s], prec)],
        );
    }
    Ok(Report::ok(Value::Object(m), csv))
}

pub fn alpha(a: &AlphaArgs, prec: u32) -> Result<Report> {
    let cost = a.cost.cost()?;
    let mut m = head("alpha", prec);
    m.insert("cost".into(), json!(cost.id()));
    let mut csv = String::from("key,value\n");
    let mut put = |m: &mut serde_json::Map<String, Value>, k: &str, v: String| {
        csv_line(&mut csv, [k.to_string(), v.clone()]);
        m.insert(k.into(), json!(v));
    };
    let one = |r: pairy::costs::AlphaResult, m: &mut serde_json::Map<String, Value>, put: &mut dyn FnMut(&mut serde_json::Map<String, Value>, &str, String)| {
        put(m, "value", dec(&r.value, prec));
        put(m, "method", r.method.to_string());
        put(m, "estimated_error", dec_short(&r.estimated_error));
    };
    match a.method {
        AlphaMethodArg::Auto => one(cost.alpha(a.tol, prec)?, &mut m, &mut put),
        AlphaMethodArg::Closed => one(cost.alpha_closed_form(prec)?, &mut m, &mut put),
        AlphaMethodArg::Numeric => one(cost.alpha_numeric(a.tol, prec)?, &mut m, &mut put),
        AlphaMethodArg::Both => {
            let c = cost.alpha_closed_form(prec)?;
            let n = cost.alpha_numeric(a.tol, prec)?;
            let rd = pairy::numerics::rel_diff(&c.value, &n.value);
            put(&mut m, "closed_form", dec(&c.value, prec));
            put(&mut m, "numeric", dec(&n.value, prec));
            put(&mut m, "numeric_estimated_error", dec_short(&n.estimated_error));
            put(&mut m, "rel_diff", dec_short(&rd));
        }
    }
    Ok(Report::ok(Value::Object(m), csv))
}

pub fn finite_n(a: &FiniteNArgs, prec: u32) -> Result<Report> {
    if a.stride == 0 {
        return Err(Error::InvalidArgument("--stride must be >= 1".into()));
    }
    let cost = a.cost.cost()?;
    let eps = resolve_eps(&a.eps, &cost, prec)?;
    let table = exact_moment_dp(a.ensemble, &cost, &eps, a.nmax, a.smax, prec)?;
    let mut m = head("finite-n", prec);
    m.insert("cost".into(), json!(cost.id()));
    m.insert("ensemble".into(), json!(a.ensemble.name()));
    m.insert("eps".into(), json!(num(&eps, prec)));
    m.insert("exact".into(), json!(table.is_exact()));
    m.insert("n_max".into(), json!(a.nmax));
    m.insert("s_max".into(), json!(a.smax));
    if a.convergence {
        let rep = rescaled_convergence(&table, prec)?;
        let mut csv = String::from("s,N,deviation,target,exponent,expected\n");
        let mut rows = Vec::new();
        for r in &rep.rows {
            let exp = r.exponent.map_or("".to_string(), |e| format!("{e:.4}"));
            for (n, d) in &r.deviations {
                csv_line(
                    &mut csv,
                    [r.s.to_string(), n.to_string(), dec_short(d), dec(&r.target, prec), exp.clone(), format!("{:.4}", r.expected)],
                );
            }
            rows.push(json!({
                "s": r.s,
                "target": dec(&r.target, prec),
                "exponent": r.exponent,
                "expected": r.expected,
                "deviations": r.deviations.iter().map(|(n, d)| json!({"N": n, "deviation": dec_short(d)})).collect::<Vec<_>>(),
            }));
        }
        m.insert("convergence".into(), json!(rows));
        return Ok(Report::ok(Value::Object(m), csv));
    }
    let mut csv = String::from("N,s,value\n");
    let mut rows = Vec::new();
    for n in (0..=a.nmax).step_by(a.stride) {
        let vals: Vec<String> = (0..=a.smax).map(|s| num(table.get(s, n), prec)).collect();
        for (s, v) in vals.iter().enumerate() {
            csv_line(&mut csv, [n.to_string(), s.to_string(), v.clone()]);
        }
        rows.push(json!({"N": n, "moments": vals}));
    }
    m.insert("rows".into(), json!(rows));
    Ok(Report::ok(Value::Object(m), csv))
}

pub fn sample(a: &SampleArgs, prec: u32, threads: Option<usize>) -> Result<Report> {
    let cost = a.cost.cost()?;
    let eps = resolve_eps(&a.eps, &cost, prec)?;
    let rescale = if a.rescale == "auto" {
        cost.p().to_f64() + 0.5
    } else {
        a.rescale
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("--rescale must be `auto` or a number, got `{}`", a.rescale)))?
    };
    let mut c = ExperimentConfig::new(a.ensemble, a.n_steps, a.samples, cost.clone());
    c.eps = eps.clone();
    c.rescale_exponent = rescale;
    c.seed = a.seed;
    c.binning = a.bins;
    c.s_max = a.smax;
    c.chains = a.chains;
    c.threads = threads.unwrap_or(0);
    let summary = run_experiment(&c)?;
    let mut v = serde_json::to_value(&summary).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let obj = v.as_object_mut().expect("summary is an object");
    obj.insert("command".into(), json!("sample"));
    obj.insert("precision".into(), json!(prec));
    if a.reference == Reference::Dp {
        let t = exact_moment_dp(a.ensemble, &cost, &eps, a.n_steps, a.smax, prec)?;
        let scale = (a.n_steps as f64).powf(-rescale);
        let reference: Vec<f64> = (1..=a.smax).map(|s| t.get(s, a.n_steps).to_f64() * scale.powi(s as i32)).collect();
        let z = compare_to_reference(&summary, &reference)?;
        obj.insert("z_scores".into(), serde_json::to_value(&z).map_err(|e| Error::InvalidArgument(e.to_string()))?);
    }
    if let Some(path) = &a.histogram {
        fs::write(path, summary.histogram.to_csv())
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Report::ok(v, summary.histogram.to_csv()))
}

type CheckRows = Vec<(String, bool, String)>;

/// Runs a check; mismatches become failed rows, other errors propagate.
fn record(rows: &mut CheckRows, name: &str, r: Result<String>) -> Result<()> {
    match r {
        Ok(detail) => rows.push((name.to_string(), true, detail)),
        Err(e) if e.is_mismatch() => rows.push((name.to_string(), false, e.to_string())),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_report(command: &str, prec: u32, rows: CheckRows, extra: Vec<(&str, Value)>) -> Report {
    let mut m = head(command, prec);
    for (k, v) in extra {
        m.insert(k.into(), v);
    }
    m.insert("checks".into(), checks_json(&rows));
    let failure = failure_of(&rows);
    m.insert("passed".into(), json!(failure.is_none()));
    Report { json: Value::Object(m), csv: checks_csv(&rows), failure }
}

pub fn tree_check(a: &TreeCheckArgs, prec: u32) -> Result<Report> {
    let mut rows = Vec::new();
    let p = &a.p;
    record(&mut rows, "mu_equals_tree_sum", check_mu_equals_tree_sum(a.smax, p, a.tol, prec).map(|r| format!("max deviation {}", dec_short(&r.max_deviation))))?;
    record(&mut rows, "y_equals_x_plus_y2", check_xy_identity(a.smax, p, a.tol, prec).map(|r| format!("max deviation {}", dec_short(&r.max_deviation))))?;
    record(&mut rows, "a_of_x", check_a_of_x(a.smax, p, a.tol, prec).map(|r| format!("max deviation {}", dec_short(&r.max_deviation))))?;
    if a.half_point {
        let d: Vec<Rat> = moments::DEFAULT_DELTAS.iter().map(|&x| Rat::from(x)).collect();
        let lh = limit_half_moments(4, &d, prec)?;
        let scale = &Constants::get(prec).sqrt_pi * 2i64;
        for s in 1..=4 {
            let h = half_point_diagrams(s, 1e-2, prec)?;
            let want = &lh[s].value / scale.powi(s as i32);
            let dev = (&h.total - &want).abs();
            let ok = dev < 1e-8;
            let r = if ok {
                Ok(format!("diagrams {} vs limit {}", h.total.to_sci_string(15), want.to_sci_string(15)))
            } else {
                Err(Error::Mismatch(format!("s = {s}: diagrams {} vs limit {}", h.total.to_sci_string(15), want.to_sci_string(15))))
            };
            record(&mut rows, &format!("half_point_s{s}"), r)?;
        }
    }
    Ok(check_report("tree-check", prec, rows, vec![("p", json!(rat(p))), ("s_max", json!(a.smax))]))
}

pub fn bounds(a: &BoundsArgs, prec: u32) -> Result<Report> {
    let c = match a.constants {
        ConstantsArg::Derived => bound_constants(&a.p, prec)?,
        ConstantsArg::Safe => bound_constants_bridge_safe(&a.p, prec)?,
    };
    let consts = json!({
        "f_p": dec(&c.f_p, prec),
        "A_p": dec(&c.a_p, prec),
        "R_p": dec(&c.r_p, prec),
        "conditions_hold": c.conditions_hold(),
        "bridge_induction_holds": c.bridge_induction_holds(),
    });
    let r = bound_margins(&a.p, a.smax, c, prec)?;
    let mut rows = Vec::new();
    let fmt_margins = |v: &[Option<Real>]| -> Vec<Value> {
        v.iter().map(|m| m.as_ref().map_or(Value::Null, |m| json!(dec_short(m)))).collect()
    };
    let viol = r.first_violation();
    let detail = match viol {
        None => Ok(format!("min margin {}", r.min_margin().map_or("-".into(), |m| dec_short(&m)))),
        Some((e, s)) => Err(Error::BoundViolation { s, detail: format!("{e} bound fails") }),
    };
    record(&mut rows, "bounds", detail)?;
    let mut extra = vec![
        ("p", json!(rat(&a.p))),
        ("constants", consts),
        ("excursion_margins", json!(fmt_margins(&r.excursion))),
        ("bridge_margins", json!(fmt_margins(&r.bridge))),
    ];
    if a.smax >= 8 {
        for e in [Ensemble::Excursion, Ensemble::Bridge] {
            let f = carleman_fit(e, &a.p, a.smax, prec)?;
            let ok = f.a <= 0.5 + 0.05;
            let d = format!("s ln s coefficient {:.4}, max excess per s {:.4}", f.a, f.max_excess_per_s);
            let res = if ok { Ok(d) } else { Err(Error::Mismatch(d)) };
            record(&mut rows, &format!("carleman_{}", e.name()), res)?;
            extra.push((
                if e == Ensemble::Excursion { "carleman_excursion" } else { "carleman_bridge" },
                json!({"a": f.a, "b": f.b, "c": f.c, "d": f.d, "max_excess_per_s": f.max_excess_per_s}),
            ));
        }
    }
    Ok(check_report("bounds", prec, rows, extra))
}

pub fn limit_half(a: &LimitHalfArgs, prec: u32) -> Result<Report> {
    let v = limit_half_moments(a.smax, &a.deltas, prec)?;
    let mut m = head("limit-half", prec);
    m.insert("deltas".into(), json!(a.deltas.iter().map(rat).collect::<Vec<_>>()));
    let mut csv = String::from("s,value,error\n");
    let mut rows = Vec::new();
    for x in &v {
        csv_line(&mut csv, [x.s.to_string(), dec(&x.value, prec), dec_short(&x.error)]);
        rows.push(json!({"s": x.s, "value": dec(&x.value, prec), "error": dec_short(&x.error)}));
    }
    m.insert("moments".into(), json!(rows));
    Ok(Report::ok(Value::Object(m), csv))
}

pub fn log_case(a: &LogCaseArgs, prec: u32) -> Result<Report> {
    let closed = tau_log_coefficients(a.smax);
    let conv = tau_log_convolution(a.smax);
    let mut rows = Vec::new();
    let r = if closed == conv {
        Ok(format!("equal through s = {}", a.smax))
    } else {
        Err(Error::Mismatch("closed form and convolution differ".into()))
    };
    record(&mut rows, "tau_closed_form", r)?;
    let tau = tau_log(a.smax, prec);
    let gm = gaussian_log_moments(a.smax, prec);
    let mut extra = vec![
        ("tau_coefficients", json!(closed.iter().map(rat).collect::<Vec<_>>())),
        ("tau", json!(tau.iter().map(|x| dec(x, prec)).collect::<Vec<_>>())),
        ("gaussian_moments", json!(gm.iter().map(|x| dec(x, prec)).collect::<Vec<_>>())),
    ];
    if let Some(nmax) = a.nmax {
        let cost = CostFunction::log_shift();
        let eps = resolve_eps(&EpsArg::Alpha, &cost, prec)?;
        let t = exact_moment_dp(Ensemble::Excursion, &cost, &eps, nmax, 2, prec)?;
        let g = Constants::get(prec).euler_gamma.to_f64();
        let mut pts = Vec::new();
        let mut n = 2;
        while n <= nmax {
            let m1 = t.get(1, n).to_f64();
            let m2 = t.get(2, n).to_f64();
            let d = n as f64 * (n as f64).ln();
            pts.push(json!({"N": n, "m2_over_n_ln_n": m2 / d, "variance_over_n_ln_n": (m2 - m1 * m1) / d}));
            n *= 2;
        }
        extra.push(("euler_gamma", json!(g)));
        extra.push(("dp", json!(pts)));
    }
    Ok(check_report("log-case", prec, rows, extra))
}

pub fn airy(a: &AiryArgs, prec: u32) -> Result<Report> {
    let mut m = head("airy", prec);
    let (kind, csv) = match &a.what {
        AiryCommand::Zeros { count } => {
            let t = AiryTables::new(*count, prec)?;
            let mut csv = String::from("k,a_k,b_k\n");
            let mut rows = Vec::new();
            for k in 0..*count {
                csv_line(&mut csv, [(k + 1).to_string(), dec(&t.zeros[k], prec), dec(&t.b[k], prec)]);
                rows.push(json!({"k": k + 1, "a_k": dec(&t.zeros[k], prec), "b_k": dec(&t.b[k], prec)}));
            }
            m.insert("zeros".into(), json!(rows));
            ("zeros", csv)
        }
        AiryCommand::Density { x } => {
            let csv = refdist::density_csv(x, prec)?;
            m.insert("points".into(), csv_pairs(&csv, "x", "density"));
            ("density", csv)
        }
        AiryCommand::Laplace { lambda } => {
            if lambda.iter().any(|&l| !(l > 0.0)) {
                return Err(Error::InvalidArgument("λ must be positive".into()));
            }
            let csv = refdist::laplace_csv(lambda, prec)?;
            m.insert("points".into(), csv_pairs(&csv, "lambda", "laplace"));
            ("laplace", csv)
        }
        AiryCommand::Moments { smax } => {
            let w = prec.min(128);
            let mut csv = String::from("s,quadrature,exact\n");
            let mut rows = Vec::new();
            for s in 0..=*smax {
                let q = airy_density_moment(s, 1e-12, w)?;
                let e = if s == 0 { Real::one(w) } else { airy_moment(s as usize, w)? };
                csv_line(&mut csv, [s.to_string(), q.to_sci_string(15), e.to_sci_string(15)]);
                rows.push(json!({"s": s, "quadrature": q.to_sci_string(15), "exact": e.to_sci_string(15)}));
            }
            m.insert("moments".into(), json!(rows));
            ("moments", csv)
        }
    };
    m.insert("kind".into(), json!(kind));
    Ok(Report::ok(Value::Object(m), csv))
}

fn csv_pairs(csv: &str, k1: &str, k2: &str) -> Value {
    Value::Array(
        csv.lines()
            .skip(1)
            .filter_map(|l| l.split_once(','))
            .map(|(a, b)| json!({k1: a, k2: b}))
            .collect(),
    )
}

pub fn verify_all(a: &VerifyAllArgs, prec: u32, threads: Option<usize>) -> Result<Report> {
    let mut rows: CheckRows = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> Result<String>| {
        let r = f();
        match r {
            Ok(d) => rows.push((name.to_string(), true, d)),
            Err(e) => rows.push((name.to_string(), false, e.to_string())),
        }
    };
    let quick = a.quick;

    run("takacs", &|| {
        let mu = moments::mu_excursion(&Rat::from(1), 30, prec)?;
        let k = moments::takacs_k(30);
        for s in 0..=30 {
            if mu[s].as_rat() != Some(&k[s]) {
                return Err(Error::Mismatch(format!("s = {s}")));
            }
        }
        Ok("μ(1) = K_s exactly for s <= 30".into())
    });

    run("canonical_shift", &|| {
        let mut worst = 0f64;
        for p in [(1, 10), (1, 4), (3, 4), (1, 1), (3, 2), (5, 2)] {
            let t = MomentTable::new(Ensemble::Excursion, &Rat::from(p), 2, 256)?;
            worst = worst.max(t.shifted[1].abs().to_f64());
        }
        if worst > 1e-40 {
            return Err(Error::Mismatch(format!("first shifted moment {worst:e}")));
        }
        Ok(format!("max |first shifted moment| {worst:e}"))
    });

    run("limit_half", &|| {
        let d: Vec<Rat> = moments::DEFAULT_DELTAS.iter().map(|&x| Rat::from(x)).collect();
        let v = limit_half_moments(3, &d, 128)?;
        let c = Constants::get(128);
        let m2 = &c.ln2 * 8i64 - &c.zeta2 * 3i64;
        let m3 = &c.ln2 * 16i64 * (&c.ln2 - 1i64) - &c.zeta2 * 8i64 + &c.zeta3 * 14i64;
        let d2 = (&v[2].value - m2).abs().to_f64();
        let d3 = (&v[3].value - m3).abs().to_f64();
        if d2.max(d3) > 1e-12 {
            return Err(Error::Mismatch(format!("deviations {d2:e}, {d3:e}")));
        }
        Ok(format!("s = 2, 3 match closed forms ({d2:.1e}, {d3:.1e})"))
    });

    run("trees", &|| {
        let s = if quick { 6 } else { 8 };
        for p in [(1, 4), (3, 4), (1, 1), (2, 1)] {
            let p = Rat::from(p);
            check_mu_equals_tree_sum(s, &p, 1e-25, prec)?;
            check_xy_identity(s, &p, 1e-25, prec)?;
        }
        Ok(format!("tree sums and Y = X + Y^2 through s = {s}"))
    });

    run("dp_vs_brute_force", &|| {
        let n_max = if quick { 7 } else { 10 };
        let costs = [CostFunction::power_half(Rat::from(1))?, CostFunction::power_one(Rat::from(2))?];
        let eps = Rat::from((1, 3));
        for cost in &costs {
            let omega = cost.table::<Rat>(n_max, (), 64)?;
            for e in [Ensemble::Excursion, Ensemble::Bridge] {
                let dp = pairy::oracle::dp_moments(e, &omega, &eps, n_max, 4)?;
                for n in 1..=n_max {
                    let bf = brute_force_moments(n, e, &omega, &eps, 4)?;
                    for s in 0..=4 {
                        if bf[s] != dp[s][n] {
                            return Err(Error::Mismatch(format!("{} {e} N = {n} s = {s}", cost.id())));
                        }
                    }
                }
            }
        }
        Ok(format!("exact equality for N <= {n_max}, s <= 4"))
    });

    run("alpha", &|| {
        let mut worst = 0f64;
        for p in [(3, 10), (3, 4), (5, 4)] {
            let c = CostFunction::gamma_ratio(Rat::from((1, 2)), Rat::from(p))?;
            let a = c.alpha_closed_form(128)?;
            let b = c.alpha_numeric(1e-12, 128)?;
            worst = worst.max(pairy::numerics::rel_diff(&a.value, &b.value).to_f64());
        }
        if worst > 1e-8 {
            return Err(Error::Mismatch(format!("relative difference {worst:e}")));
        }
        Ok(format!("closed form vs numeric, max rel diff {worst:.1e}"))
    });

    run("bounds", &|| {
        moments::verify_bounds(&Rat::from(1), 40, prec)?;
        for p in [(1, 10), (1, 4), (2, 1)] {
            let p = Rat::from(p);
            let r = bound_margins(&p, 40, bound_constants_bridge_safe(&p, prec)?, prec)?;
            if let Some((e, s)) = r.first_violation() {
                return Err(Error::BoundViolation { s, detail: format!("{e} at p = {p}") });
            }
        }
        Ok("p = 1 with the derived constants; p = 1/10, 1/4, 2 with bridge-safe constants".into())
    });

    run("sampler_vs_dp", &|| {
        let n = 50;
        let samples = if quick { 20_000 } else { 200_000 };
        let cost = CostFunction::power_half(Rat::from(1))?;
        let mut worst = 0f64;
        for e in [Ensemble::Excursion, Ensemble::Bridge] {
            let mut c = ExperimentConfig::new(e, n, samples, cost.clone());
            c.s_max = 3;
            c.rescale_exponent = 1.5;
            c.seed = 2024;
            c.threads = threads.unwrap_or(0);
            let s = run_experiment(&c)?;
            let t = exact_moment_dp(e, &cost, &Number::Exact(Rat::new()), n, 3, 64)?;
            let scale = (n as f64).powf(-1.5);
            let r: Vec<f64> = (1..=3).map(|k| t.get(k, n).to_f64() * scale.powi(k as i32)).collect();
            for z in compare_to_reference(&s, &r)? {
                worst = worst.max(z.z.abs());
            }
        }
        if worst > 4.0 {
            return Err(Error::Mismatch(format!("max |z| = {worst:.2}")));
        }
        Ok(format!("N = {n}, n = {samples}, max |z| = {worst:.2}"))
    });

    run("airy", &|| {
        let a1 = refdist::airy_zero(1, 128)?.to_f64();
        if (a1 - 2.338_107_410_459_767).abs() > 1e-12 {
            return Err(Error::Mismatch(format!("a_1 = {a1}")));
        }
        let lap = airy_laplace(&Real::from_f64(64, 1e-3), LAPLACE_TERM_CAP)?.to_f64();
        if (lap - 1.0).abs() > 1e-2 {
            return Err(Error::Mismatch(format!("Laplace at 1e-3 = {lap}")));
        }
        if quick {
            return Ok(format!("a_1 = {a1:.10}, Laplace(1e-3) = {lap:.6}"));
        }
        let mass = airy_density_moment(0, 1e-10, 64)?.to_f64();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::Mismatch(format!("∫f = {mass}")));
        }
        Ok(format!("a_1 = {a1:.10}, Laplace(1e-3) = {lap:.6}, ∫f = {mass:.12}"))
    });

    run("log_case", &|| {
        if tau_log_coefficients(20) != tau_log_convolution(20) {
            return Err(Error::Mismatch("τ closed form vs convolution".into()));
        }
        Ok("τ closed form equals the convolution through s = 20".into())
    });

    Ok(check_report("verify-all", prec, rows, vec![("quick", json!(quick))]))
}
