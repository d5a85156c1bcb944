use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pairy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairy"))
        .args(args)
        .env_remove("PAIRY_PRECISION")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema_check(v: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}");
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn moments_rational_mode() {
    let out = pairy(&["moments", "--p", "1", "--ensemble", "excursion", "--smax", "10", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    schema_check(&v);
    assert_eq!(v["mu"][2], "5/64");
    assert_eq!(v["mu"][3], "15/128");
    assert_eq!(v["mu"].as_array().unwrap().len(), 11);
}

#[test]
fn half_point_is_rejected_with_hint() {
    let out = pairy(&["moments", "--p", "0.5"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("limit-half"), "{err}");
}

#[test]
fn limit_half_values() {
    let out = pairy(&["limit-half", "--smax", "3", "--precision", "128"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    schema_check(&v);
    let m = v["moments"].as_array().unwrap();
    assert!(m[2]["value"].as_str().unwrap().starts_with("6.10375"));
    assert!(m[3]["value"].as_str().unwrap().starts_with("2.66217"));
}

#[test]
fn validation_and_numeric_exit_codes() {
    assert_eq!(code(&pairy(&["alpha", "--family", "nope", "--p", "1"])), 2);
    assert_eq!(code(&pairy(&["moments", "--p", "-1"])), 2);
    assert_eq!(code(&pairy(&["moments"])), 2);
    assert_eq!(code(&pairy(&["finite-n", "--nmax", "100000", "--p", "1"])), 2);
    // α(ω^(1)) has a pole at p = 3/2
    let out = pairy(&["alpha", "--family", "gamma-ratio", "--a", "1", "--p", "3/2", "--method", "closed"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn check_commands_report_failures() {
    // the derived constants fail for bridges when f(p) > 1/4
    let out = pairy(&["bounds", "--p", "1/4", "--smax", "20", "--precision", "128"]);
    assert_eq!(code(&out), 4);
    let v = json_of(&out);
    schema_check(&v);
    assert_eq!(v["passed"], false);
    let out = pairy(&["bounds", "--p", "1/4", "--smax", "20", "--constants", "safe", "--precision", "128"]);
    assert_eq!(code(&out), 0);
    let out = pairy(&["tree-check", "--p", "3/4", "--smax", "6", "--precision", "128"]);
    assert_eq!(code(&out), 0);
    schema_check(&json_of(&out));
    let out = pairy(&["log-case", "--smax", "12", "--nmax", "64", "--precision", "128"]);
    assert_eq!(code(&out), 0);
    schema_check(&json_of(&out));
}

#[test]
fn finite_n_is_deterministic_and_exact() {
    let args = ["finite-n", "--family", "power-half", "--p", "1", "--eps", "0", "--nmax", "6", "--smax", "2"];
    let a = pairy(&args);
    let b = pairy(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    schema_check(&v);
    assert_eq!(v["exact"], true);
    // N = 1: the single excursion has one slice of semi-length 0
    assert_eq!(v["rows"][1]["moments"][1], "1/2");
    let csv = pairy(&[&args[..], &["--format", "csv"]].concat());
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("N,s,value\n"));
    let conv = pairy(&["finite-n", "--p", "1", "--nmax", "256", "--smax", "2", "--convergence", "--precision", "128"]);
    assert_eq!(code(&conv), 0);
    schema_check(&json_of(&conv));
}

#[test]
fn sample_replays_and_writes_histogram() {
    let dir = std::env::temp_dir().join(format!("pairy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let hist = dir.join("h.csv");
    let args = [
        "sample", "--family", "power-half", "--p", "1", "--eps", "0", "-N", "40", "-n", "5000", "--seed", "9",
        "--reference", "dp", "--smax", "3", "--histogram", hist.to_str().unwrap(),
    ];
    let a = pairy(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let b = pairy(&[&args[..], &["--threads", "2"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    schema_check(&v);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["z_scores"].as_array().unwrap().len(), 3);
    let h = std::fs::read_to_string(&hist).unwrap();
    assert!(h.starts_with("bin_left,bin_right,count\n"));
    let total: u64 = h.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 5000);
}

#[test]
fn airy_and_alpha_outputs() {
    let out = pairy(&["airy", "zeros", "--count", "3", "--precision", "128", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.lines().nth(1).unwrap().starts_with("1,2.33810741045976703848"), "{s}");
    let out = pairy(&["airy", "laplace", "--lambda", "0.5,1", "--precision", "64"]);
    assert_eq!(code(&out), 0);
    schema_check(&json_of(&out));
    let out = pairy(&["alpha", "--family", "gamma-ratio", "--a", "1/2", "--p", "3/4", "--method", "both", "--precision", "128"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    schema_check(&v);
    assert!(v["rel_diff"].as_str().unwrap().parse::<f64>().unwrap() < 1e-8);
}

#[test]
fn verify_all_quick_passes() {
    let out = pairy(&["verify-all", "--quick", "--precision", "128"]);
    let v = json_of(&out);
    schema_check(&v);
    assert_eq!(code(&out), 0, "{v:#}");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("pairy-out-{}.json", std::process::id()));
    let out = pairy(&["moments", "--p", "2", "--smax", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "moments");
}
