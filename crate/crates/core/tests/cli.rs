use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mi")).env_remove("MI_THREADS").args(args).output().unwrap()
}

fn json_lines(bytes: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(bytes).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sample_ring(dir: &Path, n: usize) -> String {
    let out = dir.join("ring.csv");
    let res = mi(&["sample", "--model", "ring", "--n", &n.to_string(), "--seed", "3", "--out", path(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    path(&out).to_string()
}

#[test]
fn sample_then_decide_reports_empty_interior() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_ring(dir.path(), 400);
    let text = std::fs::read_to_string(&input).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2"));
    assert_eq!(text.lines().count(), 401);

    let res = mi(&["decide-interior", "--input", &input]);
    assert!(res.status.success());
    let v = &json_lines(&res.stdout)[0];
    assert_eq!(v["decision"], "empty");
    assert_eq!(v["n"], 400);
    assert_eq!(v["peel_size"], 0);
    assert_eq!(v["beta"], 2.5);
}

#[test]
fn disk_sample_has_interior() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disk.csv");
    let res = mi(&["sample", "--model", "ring", "--n", "1500", "--epsilon", "1", "--seed", "5", "--out", path(&out)]);
    assert!(res.status.success());
    let res = mi(&["decide-interior", "--input", path(&out), "--method", "mc", "--mc-samples", "2000"]);
    let v = &json_lines(&res.stdout)[0];
    assert_eq!(v["decision"], "nonempty");
    assert_eq!(v["method"], "mc");
}

#[test]
fn mixture_sample_labels_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mix.csv");
    let res = mi(&[
        "sample", "--model", "mixture", "--n", "50", "--epsilon", "0.1", "--y", "0.9", "--seed", "1", "--out",
        path(&out),
    ]);
    assert!(res.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2,label"));
    let noise = text.lines().skip(1).filter(|l| l.ends_with(",noise")).count();
    assert_eq!(json_lines(&res.stdout)[0]["noise"], noise);
}

#[test]
fn dtm_emits_one_line_per_query() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_ring(dir.path(), 100);
    let res = mi(&["dtm", "--input", &input, "--m0", "0.1", "--query", &input]);
    assert!(res.status.success());
    let lines = json_lines(&res.stdout);
    assert_eq!(lines.len(), 100);
    for (i, v) in lines.iter().enumerate() {
        assert_eq!(v["index"], i);
        assert!(v["dtm"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn denoise_writes_kept_and_removed() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_ring(dir.path(), 200);
    let res = mi(&["denoise", "--input", &input, "--deltan", "0.1"]);
    assert!(res.status.success());
    let v = &json_lines(&res.stdout)[0];
    let kept = v["kept"].as_u64().unwrap();
    let removed = v["removed"].as_u64().unwrap();
    assert_eq!(kept + removed, 200);
    let rows = |p: &str| std::fs::read_to_string(p).unwrap().lines().count() as u64 - 1;
    assert_eq!(rows(v["kept_path"].as_str().unwrap()), kept);
    assert_eq!(rows(v["removed_path"].as_str().unwrap()), removed);
}

#[test]
fn estimate_radius_reports_rho() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_ring(dir.path(), 300);
    let res = mi(&["estimate-radius", "--input", &input, "--f0", "0.5", "--c", "3"]);
    assert!(res.status.success());
    let v = &json_lines(&res.stdout)[0];
    let rho = 3.0 * (300f64.ln() / 300.0).sqrt();
    assert!((v["rho_n"].as_f64().unwrap() - rho).abs() < 1e-12);
    assert_eq!(v["r_hat"], 0.0);
}

#[test]
fn experiment_writes_reduced_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let res = mi(&[
        "experiment", "--epsilon", "0.1", "--n", "10,25", "--y", "0.9", "--replicates", "20", "--out", path(&out),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "epsilon,n,y,correct_rate,paper_value,abs_diff,mean_kept,replicates,seconds");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.1,10,0.9,"));
    assert!(lines[2].starts_with("0.1,25,0.9,"));
    assert!(lines[1].ends_with(",20,"));
    let summary = &json_lines(&res.stdout)[0];
    assert_eq!(summary["cells"], 2);
}

#[test]
fn verify_passes() {
    let res = mi(&["verify", "--seed", "7"]);
    let lines = json_lines(&res.stdout);
    assert!(res.status.success(), "{lines:?}");
    assert!(lines.len() >= 2);
}

#[test]
fn usage_and_runtime_errors_have_distinct_codes() {
    assert_eq!(mi(&["bogus"]).status.code(), Some(2));
    assert_eq!(mi(&["sample", "--model", "ring"]).status.code(), Some(2));

    let res = mi(&["decide-interior", "--input", "/nonexistent/cloud.csv"]);
    assert_eq!(res.status.code(), Some(1));
    let err = &json_lines(&res.stderr)[0];
    assert_eq!(err["error"], "io");

    let dir = tempfile::tempdir().unwrap();
    let input = sample_ring(dir.path(), 50);
    let res = mi(&["decide-interior", "--input", &input, "--beta", "1.0"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(json_lines(&res.stderr)[0]["message"].as_str().is_some());
}
