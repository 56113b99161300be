use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn wgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgs")).args(args).output().expect("binary runs")
}

fn wgs_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgs")).args(args).env(key, val).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn two_chain(a: &str, b: &str, chi: f64) -> Value {
    json!({ "vertices": [a, b], "edges": [{ "a": a, "b": b, "chi": chi }] })
}

#[test]
fn build_two_qubit_graph() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", &two_chain("x", "y", 1.0));
    let o = wgs(&["build", "--graph", s(&g), "--amplitudes"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["num_qubits"], 2);
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let amp = &v["amplitudes"][3];
    assert!((amp[0].as_f64().unwrap() - 0.5 * 1.0f64.cos()).abs() < 1e-12);
    assert!((amp[1].as_f64().unwrap() + 0.5 * 1.0f64.sin()).abs() < 1e-12);
}

#[test]
fn malformed_json_is_a_validation_error() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("bad.json");
    std::fs::write(&p, "{ \"vertices\": [").unwrap();
    assert_eq!(wgs(&["build", "--graph", s(&p)]).status.code(), Some(2));
    let dup = write(&d, "dup.json", &json!({ "vertices": ["a", "a"] }));
    assert_eq!(wgs(&["build", "--graph", s(&dup)]).status.code(), Some(2));
    assert_eq!(wgs(&["build", "--graph", "/nonexistent/g.json"]).status.code(), Some(2));
}

#[test]
fn out_of_range_weight_is_normalized_with_warning() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", &two_chain("x", "y", 3.0 * PI / 2.0));
    let o = wgs(&["build", "--graph", s(&g), "--amplitudes"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v = stdout_json(&o);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    // e^{-i 3π/2} = e^{i π/2} = i
    let amp = &v["amplitudes"][3];
    assert!(amp[0].as_f64().unwrap().abs() < 1e-12 && (amp[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn type_i_on_two_chains_gives_four_quarters() {
    let d = TempDir::new().unwrap();
    let l = write(&d, "l.json", &two_chain("x", "a", 0.7));
    let r = write(&d, "r.json", &two_chain("b", "y", -2.2));
    let o = wgs(&["fuse", "i", "--left", s(&l), "--right", s(&r), "--a", "a", "--b", "b"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let outs = v["outcomes"].as_array().unwrap();
    assert_eq!(outs.len(), 4);
    for x in outs {
        assert!((x["probability"].as_f64().unwrap() - 0.25).abs() < 1e-10);
    }
    let plus = outs.iter().find(|x| x["label"] == "success+").unwrap();
    assert_eq!(plus["post_graph"]["vertices"], json!(["x", "a+b", "y"]));
}

#[test]
fn type_ii_without_logical_pair_fails() {
    let d = TempDir::new().unwrap();
    let l = write(&d, "l.json", &two_chain("x", "a", 0.7));
    let r = write(&d, "r.json", &json!({ "vertices": ["c", "b", "e"], "edges": [
        { "a": "c", "b": "b", "chi": 1.0 }, { "a": "b", "b": "e", "chi": 1.0 }] }));
    let o = wgs(&["fuse", "ii", "--left", s(&l), "--right", s(&r), "--a", "a", "--b", "b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("logical qubit"));
}

fn logical_left(d: &TempDir) -> PathBuf {
    write(d, "l.json", &json!({ "vertices": ["x", "a"], "edges": [{ "a": "x", "b": "a", "chi": 0.9 }],
        "logical_pairs": [{ "partner": "ap", "anchor": "a" }] }))
}

fn right3(d: &TempDir, c1: f64, c2: f64) -> PathBuf {
    write(d, "r.json", &json!({ "vertices": ["c", "b", "e"], "edges": [
        { "a": "c", "b": "b", "chi": c1 }, { "a": "b", "b": "e", "chi": c2 }] }))
}

#[test]
fn type_ii_at_pi_splits_failures_evenly() {
    let d = TempDir::new().unwrap();
    let (l, r) = (logical_left(&d), right3(&d, PI, PI));
    let o = wgs(&["fuse", "ii", "--left", s(&l), "--right", s(&r), "--a", "ap", "--b", "b"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    for label in ["failure:+-", "failure:-+"] {
        let f = v["outcomes"].as_array().unwrap().iter().find(|x| x["label"] == label).unwrap();
        assert!((f["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(f["good_failure"], true);
    }
}

#[test]
fn generalized_identity_network_leaves_product_outcomes() {
    let d = TempDir::new().unwrap();
    let (l, r) = (logical_left(&d), right3(&d, 0.5, 2.0));
    let eye: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let u = write(&d, "u.json", &json!({ "n": 4, "re": eye }));
    let o = wgs(&["fuse", "gen", "--left", s(&l), "--right", s(&r), "--a", "ap", "--b", "b", "--unitary", s(&u)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    // Each photon keeps its polarization and its own detector pair: four
    // relevant patterns at ¼, none of which entangles the two sides.
    let outs = v["outcomes"].as_array().unwrap();
    assert_eq!(outs.len(), 4);
    for x in outs {
        assert!((x["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
        assert!(x["det_rho"].as_f64().unwrap() < 1e-14);
    }
}

#[test]
fn non_unitary_network_is_rejected() {
    let d = TempDir::new().unwrap();
    let (l, r) = (logical_left(&d), right3(&d, 0.5, 2.0));
    let u = write(&d, "u.json", &json!({ "n": 4, "re": vec![vec![0.5; 4]; 4] }));
    let o = wgs(&["fuse", "gen", "--left", s(&l), "--right", s(&r), "--a", "ap", "--b", "b", "--unitary", s(&u)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampling_needs_a_seed_and_is_reproducible() {
    let d = TempDir::new().unwrap();
    let l = write(&d, "l.json", &two_chain("x", "a", 0.7));
    let r = write(&d, "r.json", &two_chain("b", "y", -2.2));
    let base = ["fuse", "i", "--left", s(&l), "--right", s(&r), "--a", "a", "--b", "b", "--sample", "400"];
    assert_eq!(wgs(&base).status.code(), Some(2));
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "7"]);
    let (a, b) = (wgs(&seeded), wgs(&seeded));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    let total: u64 = v["samples"]["counts"].as_array().unwrap().iter().map(|c| c[1].as_u64().unwrap()).sum();
    assert_eq!(total, 400);
}

#[test]
fn logical_subcommand_reports_success_probability() {
    let d = TempDir::new().unwrap();
    let g = right3(&d, PI / 2.0, PI / 2.0);
    let o = wgs(&["fuse", "logical", "--graph", s(&g), "--vertex", "b"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let succ = v["outcomes"].as_array().unwrap().iter().find(|x| x["label"] == "success").unwrap();
    assert!((succ["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(succ["post_graph"]["logical_pairs"][0]["partner"], "c");
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn scan_logical_prob_matches_closed_form() {
    let o = wgs(&["scan", "logical-prob", "--points", "50", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["chi", "analytic", "simulated", "residual"]);
    assert_eq!(rows.len(), 51);
    let last = &rows[50];
    assert!((last[0].parse::<f64>().unwrap() - PI).abs() < 1e-12);
    assert!((last[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn scan_failure_split_at_pi_is_even() {
    let o = wgs(&["scan", "failure-split", "--points", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    for col in [3, 4, 5, 6] {
        assert!((rows[1][col].parse::<f64>().unwrap() - 0.25).abs() < 1e-12, "{}", rows[0][col]);
    }
}

#[test]
fn scan_ghz_range_at_right_angles_is_a_third_of_pi() {
    let h = format!("{}", PI / 2.0);
    let o = wgs(&["scan", "ghz-range", "--chi1", &h, "--chi2", &h]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["chi1", "chi2", "max_analytic", "max_simulated", "residual"]);
    assert!((rows[1][2].parse::<f64>().unwrap() - PI / 3.0).abs() < 1e-12);
    assert!((rows[1][3].parse::<f64>().unwrap() - PI / 3.0).abs() < 1e-12);
}

#[test]
fn scans_are_identical_across_thread_counts() {
    let args = ["scan", "det-entropy", "--points", "6", "--seed", "3", "--tol", "1e-10"];
    let one = wgs_env(&args, "WGS_THREADS", "1");
    let four = wgs_env(&args, "WGS_THREADS", "4");
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
    assert!(csv_rows(&one).len() > 1);
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = wgs_env(&["scan", "xi-solve", "--points", "4"], "WGS_THREADS", "zero");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn xi_scan_writes_file() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("xi.csv");
    let o = wgs(&["scan", "xi-solve", "--points", "6", "--tol", "1e-8", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("chi_bf,chi_target,xi,achieved,residual,fidelity,status\n"));
    assert_eq!(text.lines().count(), 1 + 25);
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    assert_eq!(wgs(&["scan", "logical-prob", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(wgs(&["verify", "--quick", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn quick_verify_passes() {
    let o = wgs(&["verify", "--quick"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn perturbed_formulas_fail_verification() {
    let o = wgs(&["verify", "--quick", "--only", "1,2,3,6", "--perturb", "1e-6"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("FAIL")).count(), 4);
}

#[test]
fn verify_writes_json_results() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("v.json");
    let o = wgs(&["verify", "--quick", "--only", "5", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v[0]["id"], 5);
    assert_eq!(v[0]["passed"], true);
}
