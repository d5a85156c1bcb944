use pairy::numerics::{Number, Rat, Real};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// What a subcommand produced. `failure` is set by check commands whose
/// report is complete but whose assertions did not all hold.
pub struct Report {
    pub json: Value,
    pub csv: String,
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(json: Value, csv: String) -> Report {
        Report { json, csv, failure: None }
    }
}

/// Decimal digits carried by `prec` bits.
pub fn digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn dec(x: &Real, prec: u32) -> String {
    x.to_sci_string(digits(prec))
}

/// Short decimal for error estimates.
pub fn dec_short(x: &Real) -> String {
    x.to_sci_string(3)
}

pub fn num_dec(n: &Number, prec: u32) -> String {
    dec(&n.to_real(prec), prec)
}

/// `"num/den"` when exact, else the decimal string.
pub fn num(n: &Number, prec: u32) -> String {
    n.exact_string().unwrap_or_else(|| num_dec(n, prec))
}

pub fn rat(r: &Rat) -> String {
    num(&Number::Exact(r.clone()), 64)
}

pub fn csv_line<I: IntoIterator<Item = String>>(out: &mut String, cells: I) {
    let cells: Vec<String> = cells.into_iter().collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// `name,status,detail` lines for check reports.
pub fn checks_csv(rows: &[(String, bool, String)]) -> String {
    let mut out = String::from("check,status,detail\n");
    for (name, ok, detail) in rows {
        csv_line(&mut out, [name.clone(), status(*ok).into(), format!("\"{}\"", detail.replace('"', "'"))]);
    }
    out
}

pub fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn checks_json(rows: &[(String, bool, String)]) -> Value {
    Value::Array(
        rows.iter()
            .map(|(name, ok, detail)| serde_json::json!({"check": name, "status": status(*ok), "detail": detail}))
            .collect(),
    )
}

pub fn failure_of(rows: &[(String, bool, String)]) -> Option<String> {
    let failed: Vec<&str> = rows.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", ")))
}
