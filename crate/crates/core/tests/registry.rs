use dlab_core::checks::{registry, run_check, CheckReport};
use serde_json::{json, Map, Value};

fn quick() -> Map<String, Value> {
    json!({"samples": 2000, "points": 20, "words": 10, "pairs": 3, "maps": 5})
        .as_object()
        .cloned()
        .unwrap()
}

#[test]
fn every_check_runs_and_reports() {
    for name in registry() {
        let r = run_check(name, &quick(), 7).unwrap();
        assert_eq!(r.name, name);
        assert_eq!(r.seed, 7);
        assert!(!r.metrics.is_empty(), "{name} reported nothing");
        assert!(r.pass, "{name} failed: {:?}", r.metrics);
        assert_eq!(r.config["samples"], 2000);
    }
}

#[test]
fn reports_round_trip_through_json() {
    let r = run_check("stepk-propagation", &quick(), 1).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: CheckReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: Value = serde_json::from_str(&text).unwrap();
    for key in ["name", "pass", "metrics", "config", "seed", "runtime_ms", "notes"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn same_seed_same_metrics_other_seed_differs() {
    let a = run_check("transcendental-growth", &quick(), 3).unwrap();
    let b = run_check("transcendental-growth", &quick(), 3).unwrap();
    let c = run_check("transcendental-growth", &quick(), 4).unwrap();
    assert_eq!(a.metrics, b.metrics);
    assert_ne!(a.metrics, c.metrics);
}

#[test]
fn overrides_reach_the_estimator() {
    let mut cfg = quick();
    cfg.insert("r_start".into(), json!(100));
    cfg.insert("steps".into(), json!(3));
    let r = run_check("coordinate-growth", &cfg, 0).unwrap();
    assert!(r.metrics.contains_key("t_z@1e4"));
    assert!(!r.metrics.contains_key("t_z@1e5"));
    assert_eq!(r.metrics["t_z@1e2.skipped"], 0.0);
}

#[test]
fn odd_polynomial_breaks_the_symmetry_note() {
    let mut cfg = quick();
    cfg.insert("poly".into(), json!("-1,1,0,0,1"));
    let r = run_check("proper-subgroup", &cfg, 0).unwrap();
    assert!(r.notes.contains("not even"));
}
