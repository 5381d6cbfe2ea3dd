use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nadegen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nadegen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn trivial_limit_is_half_at_plus_and_minus_i() {
    for depth in ["1", "3", "8"] {
        let v = stdout_json(&nadegen(&["limit", "--depth", depth]));
        let atoms = v["measure"]["atoms"].as_array().unwrap();
        assert_eq!(atoms.len(), 2);
        let mut ims: Vec<f64> = atoms
            .iter()
            .map(|a| {
                assert_eq!(a["mass"], serde_json::json!([1, 2]));
                assert_eq!(a["target"]["label"][0].as_f64().unwrap(), 0.0);
                a["target"]["label"][1].as_f64().unwrap()
            })
            .collect();
        ims.sort_by(f64::total_cmp);
        assert_eq!(ims, vec![-1.0, 1.0]);
    }
}

#[test]
fn non_snc_model_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "bad.json",
        r#"{"divisors": [
            {"name": "A", "eta": {"type": 2, "center": 0, "q": [1, 1]}},
            {"name": "B", "eta": {"type": 2, "center": 1, "q": [1, 1]}},
            {"name": "C", "eta": {"type": 2, "center": 2, "q": [1, 1]}}
        ]}"#,
    );
    let out = nadegen(&["model", "validate", &model]);
    assert_eq!(out.status.code(), Some(5));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    // the three disks meet at the Gauss point
    assert_eq!(err["error"]["witness_point"]["q"], serde_json::json!([0, 1]));
    assert!(err["error"]["witness_point"]["center"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn valid_model_round_trips_through_show() {
    let dir = tempfile::tempdir().unwrap();
    let out = nadegen(&["example-quadratic", "--n", "1", "--complex-depth", "6", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let model = dir.path().join("model_X1.json");
    let v = stdout_json(&nadegen(&["model", "validate", model.to_str().unwrap()]));
    assert_eq!(v["components"], 3);
    assert_eq!(v["nodes"], 2);
    let shown = stdout_json(&nadegen(&["model", "show", model.to_str().unwrap()]));
    assert_eq!(shown["divisors"].as_array().unwrap().len(), 3);
    let dot = nadegen(&["model", "dot", model.to_str().unwrap()]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph"));
}

#[test]
fn exit_codes_are_distinct_per_failure() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "garbage.json", "{not json");
    let empty = write(dir.path(), "empty.json", r#"{"divisors": []}"#);
    let good = write(
        dir.path(),
        "good.json",
        r#"{"numerator": [{"terms": [[1, 1, 1.0, 0.0]]}, 0, 1], "denominator": [1]}"#,
    );
    assert_eq!(nadegen(&["model", "validate", "/nonexistent/model.json"]).status.code(), Some(1));
    assert_eq!(nadegen(&["limit", "--depth", "nope"]).status.code(), Some(2));
    assert_eq!(nadegen(&["model", "validate", &garbage]).status.code(), Some(3));
    assert_eq!(nadegen(&["model", "validate", &empty]).status.code(), Some(4));
    assert_eq!(nadegen(&["limit", "--map", &good]).status.code(), Some(7));
    assert_eq!(nadegen(&["limit", "--depth", "0"]).status.code(), Some(8));
    assert_eq!(nadegen(&["verify", "--t", "0.01,0.1"]).status.code(), Some(8));
    assert_eq!(nadegen(&["verify", "--eps", "0"]).status.code(), Some(8));
}

#[test]
fn example_tower_measure() {
    let v = stdout_json(&nadegen(&["example-quadratic", "--n", "3", "--complex-depth", "8"]));
    let atoms = v["measure"]["atoms"].as_array().unwrap();
    // two atoms on each of the eight deepest components
    assert_eq!(atoms.len(), 16);
    assert!(atoms.iter().all(|a| a["mass"] == serde_json::json!([1, 16])));
    assert!(atoms.iter().all(|a| a["target"]["component"].as_str().unwrap().len() == 4));
    assert_eq!(v["node_check"]["all_exact"], true);
    assert_eq!(v["s_check"]["agreement"], 1.0);
    assert_eq!(v["reduction"], "genuinely_bad");
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["limit", "--model", "tower:2", "--depth", "6", "--cap", "20", "--rng-seed", "11", "--check-nodes"];
    let a = nadegen(&args);
    let b = nadegen(&[&["--threads", "1"], &args[..]].concat());
    let c = nadegen(&[&["--threads", "4"], &args[..]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["measure"]["rng_seed"], 11);
    assert_eq!(v["measure"]["stochastic"], true);
}

#[test]
fn verify_table_as_csv() {
    let out = nadegen(&["verify", "--depth", "8", "--t", "0.1,0.001", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let recs: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 4);
    for r in &recs {
        let d: f64 = r[5].parse().unwrap();
        assert!(d <= 0.05, "{r:?}");
    }
}

#[test]
fn s_check_classifies_branch_points_and_off_span_points() {
    let dir = tempfile::tempdir().unwrap();
    let cands = write(
        dir.path(),
        "cands.json",
        r#"[{"type": 2, "center": 0, "q": [1, 1]}, {"type": 2, "center": 0, "q": [-1, 1]}]"#,
    );
    let v = stdout_json(&nadegen(&["s-check", "--depth", "5", "--eta", ",+,-+", "--candidates", &cands]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let in_s: Vec<bool> = rows.iter().map(|r| r["in_s"].as_bool().unwrap()).collect();
    assert_eq!(in_s, vec![false, false, true, true, true]);
    assert_eq!(v["agreement"], 1.0);
}

#[test]
fn measure_exports_sample_and_span() {
    let v = stdout_json(&nadegen(&["measure", "--depth", "3", "--seed", "0.5"]));
    let pts = v["sample"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 8);
    assert!(v["span"]["vertices"].as_array().unwrap().len() > 8);
    let dot = nadegen(&["measure", "--depth", "2", "--format", "dot"]);
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 6);
}
