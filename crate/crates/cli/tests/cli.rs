use dlab_core::parse::parse_complex;
use dlab_core::Complex64;
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn dlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlab")).args(args).output().expect("run dlab")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn word_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

const SHEAR_AND_INVERSE: &str = r#"{"letters": [
    {"kind": "overshear", "side": "first", "f": "0.1", "g": "1 + x^2"},
    {"kind": "overshear", "side": "first", "f": "-0.1", "g": "-(1 + x^2)*exp(-0.1*x)"}
]}"#;

const MIXED: &str = r#"{"letters": [
    {"kind": "overshear", "side": "second", "f": "0", "g": "0.2"},
    {"kind": "involution"},
    {"kind": "overshear", "side": "second", "f": "0", "g": "0.01*x - 0.3"},
    {"kind": "overshear", "side": "first", "f": "0.02", "g": "exp(0.1*x)"}
]}"#;

/// (x, y, z) = (3, 5, 2) lies on xy = z^4 - 1.
const POINT: &str = "3,5,2";

#[test]
fn counterexample_check_passes() {
    let out = dlab(&["check", "--name", "counterexample-n2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["name"], "counterexample-n2");
    assert_eq!(report["pass"], true);
    assert!(report["metrics"]["a6_max_entry_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn failing_check_exits_one() {
    // A does not preserve xy = z^2 + z - 1
    let out = dlab(&["check", "--name", "counterexample-n2", "--poly", "-1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dlab(&["check", "--name", "no-such-check"]).status.code(), Some(2));
    assert_eq!(dlab(&["check"]).status.code(), Some(2));
    assert_eq!(dlab(&["tchar", "--expr", "z", "--factor", "1"]).status.code(), Some(2));
    assert_eq!(dlab(&["tchar", "--expr", "z", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(dlab(&["tchar", "--expr", "2x"]).status.code(), Some(2));
    assert_eq!(dlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tchar_csv_slope() {
    let out = dlab(&[
        "tchar", "--poly", "-1,0,0,0,1", "--expr", "z", "--r-start", "100", "--factor", "10", "--steps", "5",
        "--samples", "200000", "--seed", "42", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,mean,stderr,n_samples,n_skipped,seed"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            assert_eq!(cols.len(), 6);
            assert_eq!(cols[5], "42");
            (cols[0].parse::<f64>().unwrap().ln(), cols[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    // least-squares slope against log r
    let n = rows.len() as f64;
    let xb = rows.iter().map(|r| r.0).sum::<f64>() / n;
    let yb = rows.iter().map(|r| r.1).sum::<f64>() / n;
    let slope = rows.iter().map(|r| (r.0 - xb) * (r.1 - yb)).sum::<f64>()
        / rows.iter().map(|r| (r.0 - xb).powi(2)).sum::<f64>();
    assert!((1.8..=2.2).contains(&slope), "slope {slope}");
}

#[test]
fn tchar_json_has_estimates() {
    let out = dlab(&["tchar", "--expr", "x*exp(z)", "--steps", "2", "--samples", "1000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["r"], 10.0);
    assert_eq!(rows[1]["n_samples"].as_u64().unwrap() + rows[1]["n_skipped"].as_u64().unwrap(), 1000);
}

#[test]
fn reduce_cancels_inverse_pair() {
    let f = word_file(SHEAR_AND_INVERSE);
    let out = dlab(&["word", "reduce", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["letters"].as_array().unwrap().len(), 0);
}

fn coords(v: &Value) -> Vec<Complex64> {
    ["x", "y", "z"].iter().map(|k| parse_complex(v[k].as_str().unwrap()).unwrap()).collect()
}

#[test]
fn reduce_round_trip_agrees_pointwise() {
    let original = word_file(MIXED);
    let out = dlab(&["word", "reduce", "--file", original.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let reduced = word_file(&String::from_utf8(out.stdout).unwrap());
    let apply = |f: &tempfile::NamedTempFile| {
        let out = dlab(&["word", "apply", "--file", f.path().to_str().unwrap(), "--point", POINT]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        coords(&stdout_json(&out))
    };
    let (a, b) = (apply(&original), apply(&reduced));
    for (p, q) in a.iter().zip(&b) {
        assert!((p - q).norm() <= 1e-8 * (1.0 + p.norm()), "{p} vs {q}");
    }
}

#[test]
fn apply_rejects_points_off_the_surface() {
    let f = word_file(MIXED);
    let out = dlab(&["word", "apply", "--file", f.path().to_str().unwrap(), "--point", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dlab(&["word", "apply", "--file", f.path().to_str().unwrap(), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalform_reports_shape_and_conjugator() {
    let f = word_file(MIXED);
    let out = dlab(&["word", "normalform", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["shape"].is_object() || v["shape"].is_string());
    assert!(v["normal"]["letters"].is_array());
    assert!(v["conjugator"]["letters"].is_array());
}

#[test]
fn malformed_word_file_is_a_usage_error() {
    let f = word_file(r#"{"letters": [{"kind": "rotation"}]}"#);
    assert_eq!(dlab(&["word", "reduce", "--file", f.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dlab(&["word", "reduce", "--file", "/nonexistent/w.json"]).status.code(), Some(2));
}

#[test]
fn jacobian_of_involution_is_minus_one() {
    let f = word_file(r#"{"letters": [{"kind": "involution"}]}"#);
    let out = dlab(&["jacobian", "--file", f.path().to_str().unwrap(), "--point", POINT]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let j = parse_complex(v["jacobian"].as_str().unwrap()).unwrap();
    assert!((j + 1.0).norm() < 1e-6, "{j}");
}

#[test]
fn check_all_emits_full_registry() {
    let out = dlab(&["check", "--all", "--samples", "2000"]);
    let v = stdout_json(&out);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 17);
    assert!(names.contains(&"main-estimate-report"));
    let all_pass = v.as_array().unwrap().iter().all(|r| r["pass"] == true);
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}
