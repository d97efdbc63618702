#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use locsko::metrics::{omega_prime, omega_prime_oracle};
use locsko::{CompactSet, MetricKind, StateSpace, StepPath};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn locsko(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locsko")).args(args).output().expect("binary runs")
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn load(name: &str) -> StepPath {
    StepPath::from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

/// Parse a CSV body into rows of fields (header dropped).
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn identical_paths_are_at_distance_zero() {
    let out = stdout(&locsko(&["dist", &f("two_jumps.json"), &f("two_jumps.json"), "--t", "2", "--radius", "5"]));
    let r = &rows(&out)[0];
    assert_eq!(&r[2..5], &["0.0", "0.0", "0.0"]);
}

#[test]
fn jump_fixture_matches_brute_force() {
    let out = stdout(&locsko(&["dist", &f("jump_1.json"), &f("jump_1_1.json"), "--t", "2", "--radius", "5"]));
    let rt: f64 = rows(&out)[0][2].parse().unwrap();
    let s = StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap();
    let k = CompactSet::centered_ball(1, 5.0);
    let brute = common::rho_tilde_brute(&load("jump_1.json"), &load("jump_1_1.json"), 2.0, &k, &s);
    assert!((rt - 0.1).abs() < 1e-9, "{rt}");
    assert!((rt - brute).abs() < 1e-9, "{rt} vs {brute}");
}

#[test]
fn dist_matrix_lists_every_pair() {
    let out = stdout(&locsko(&[
        "dist",
        &f("jump_1.json"),
        &f("jump_1_1.json"),
        &f("constant.json"),
        "--t",
        "1",
        "--radius",
        "3",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let pairs: Vec<(u64, u64)> = v.as_array().unwrap().iter().map(|r| (r["i"].as_u64().unwrap(), r["j"].as_u64().unwrap())).collect();
    assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
}

#[test]
fn missing_file_exits_2_and_names_it() {
    let o = locsko(&["dist", &f("jump_1.json"), "no/such/path.json", "--t", "1", "--radius", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/path.json"));
}

#[test]
fn malformed_path_reports_position() {
    let o = locsko(&["omega", &f("malformed.json"), "--t", "1", "--radius", "1", "--deltas", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn constant_path_has_flat_curve() {
    let out = stdout(&locsko(&["omega", &f("constant.json"), "--t", "2", "--radius", "5", "--deltas", "1,0.5,0.1"]));
    assert!(rows(&out).iter().all(|r| r[1] == "0.0"));
}

#[test]
fn two_jump_curve_matches_dp_and_oracle() {
    let deltas = [0.9, 0.6, 0.41, 0.39, 0.35, 0.29, 0.1];
    let arg = deltas.map(|d| d.to_string()).join(",");
    let out = stdout(&locsko(&["omega", &f("two_jumps.json"), "--t", "2", "--radius", "5", "--deltas", &arg]));
    let x = load("two_jumps.json");
    let s = StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap();
    let k = CompactSet::centered_ball(1, 5.0);
    let got: Vec<f64> = rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    for (w, d) in got.iter().zip(deltas) {
        assert_eq!(*w, omega_prime(&x, 2.0, &k, d, &s));
        assert!((w - omega_prime_oracle(&x, 2.0, &k, d, &s, 300, 1)).abs() < 1e-12);
    }
    // step shape: both jumps, then the 0.5 jump alone (first cell ends at 0.7), then nothing
    assert_eq!(got, vec![1.0, 0.5, 0.5, 0.5, 0.5, 0.0, 0.0]);
}

#[test]
fn empty_delta_grid_exits_2() {
    let o = locsko(&["omega", &f("constant.json"), "--t", "1", "--radius", "1", "--deltas", ""]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unit_rate_is_identity() {
    let out = stdout(&locsko(&["timechange", &f("two_jumps.json"), "--g", r#"{"kind": "constant", "value": 1.0}"#]));
    assert_eq!(StepPath::from_json(&out).unwrap(), load("two_jumps.json"));
}

#[test]
fn bad_rate_function_exits_2() {
    let o = locsko(&["timechange", &f("two_jumps.json"), "--g", r#"{"kind": "constant", "value": -1.0}"#]);
    assert_eq!(o.status.code(), Some(2));
    let o = locsko(&["timechange", &f("two_jumps.json"), "--g", r#"{"kind": "expr", "expr": "1 +"}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_sampler_gives_exact_probabilities() {
    let out = stdout(&locsko(&["--config", &f("tight.json"), "tight"]));
    for r in rows(&out) {
        assert!(r[5] == "0.0" || r[5] == "1.0", "{r:?}");
        assert_eq!(r[6], "0.0");
    }
    let fixed: Vec<String> = rows(&out).into_iter().filter(|r| r[0] == "fixed").map(|r| r[5].clone()).collect();
    assert_eq!(fixed, vec!["1.0", "0.0", "0.0"]);
}

#[test]
fn demo_matches_pinned_csv() {
    let out = stdout(&locsko(&["--config", &f("demo.json"), "demo"]));
    assert_eq!(out, std::fs::read_to_string(fixture("demo_expected.csv")).unwrap());
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"metric": "chordal", "colour": "blue"}"#).unwrap();
    let o = locsko(&["--config", cfg.to_str().unwrap(), "simulate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn missing_section_exits_2() {
    let o = locsko(&["--config", &f("tight.json"), "demo"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("path.json");
    let o = locsko(&["--config", &f("simulate_ode.json"), "--out", out.to_str().unwrap(), "simulate"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let p = StepPath::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(p.xi().is_finite());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1, "temporary file left behind");
}

#[test]
fn seed_changes_simulation() {
    let a = stdout(&locsko(&["--config", &f("simulate_levy.json"), "--seed", "1", "simulate"]));
    let b = stdout(&locsko(&["--config", &f("simulate_levy.json"), "--seed", "2", "simulate"]));
    let a2 = stdout(&locsko(&["--config", &f("simulate_levy.json"), "--seed", "1", "--jobs", "1", "simulate"]));
    assert_ne!(a, b);
    assert_eq!(a, a2);
}

#[test]
fn path_json_round_trip_is_byte_identical() {
    let x = stdout(&locsko(&["--config", &f("simulate_levy.json"), "--seed", "4", "simulate"]));
    let back = StepPath::from_json(&x).unwrap().to_json();
    assert_eq!(x, back);
    let y = stdout(&locsko(&["timechange", &f("two_jumps.json"), "--g", r#"{"kind": "constant", "value": 1.0}"#]));
    assert_eq!(y, load("two_jumps.json").to_json());
}

#[test]
fn compactness_verdicts() {
    let out = stdout(&locsko(&["--config", &f("compactness.json"), "compactness"]));
    assert!(rows(&out).iter().all(|r| r[3] == "1.0" && r[4] == "false"));
}
