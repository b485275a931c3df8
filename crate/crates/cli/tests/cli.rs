use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_STATE: &str = r#"{"N": 8, "A": [1, 1, 1, 1, 0, 0, 0, 0], "B": [2, 2, 2, 4, 1, 1, 1], "L": "1"}"#;
const KICKER_STATE: &str =
    r#"{"N": 13, "A": [0, 0, 2, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0], "B": [1, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1], "L": "1"}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }
}

fn toda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn evolve_zero_steps_echoes_input() {
    let fx = Fixture::new();
    let p = fx.file("s.json", r#"{"N": 2, "a": ["1", "3/2"], "b": ["1/2"]}"#);
    let v: Value =
        serde_json::from_str(&stdout(&toda(&["evolve", "--state", p.to_str().unwrap(), "--steps", "0"]))).unwrap();
    let traj = v["trajectory"].as_array().unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj[0], serde_json::json!({"N": 2, "a": ["1", "3/2"], "b": ["1/2"]}));
}

#[test]
fn evolve_invariants_are_constant() {
    let fx = Fixture::new();
    let p = fx.file("s.json", r#"{"N": 2, "a": ["1", "2"], "b": ["1/2"]}"#);
    let v: Value = serde_json::from_str(&stdout(&toda(&[
        "evolve",
        "--state",
        p.to_str().unwrap(),
        "--steps",
        "3",
        "--invariants",
    ])))
    .unwrap();
    let inv = v["invariants"].as_array().unwrap();
    assert_eq!(inv.len(), 4);
    assert!(inv.iter().all(|x| *x == inv[0]));
    assert_eq!(inv[0], serde_json::json!(["7/2", "2"]));
}

#[test]
fn evolve_input_errors() {
    let fx = Fixture::new();
    let neg = fx.file("neg.json", r#"{"a": ["0", "2"], "b": ["1"]}"#);
    assert_eq!(code(&toda(&["evolve", "--state", neg.to_str().unwrap(), "--require-positive"])), 2);
    let bad = fx.file("bad.json", "{");
    let o = toda(&["evolve", "--state", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(code(&toda(&["evolve", "--state", "/nonexistent/state.json"])), 2);
    assert_eq!(code(&toda(&["evolve", "--bogus"])), 2);
}

#[test]
fn evolve_breakdown_is_a_computation_error() {
    let fx = Fixture::new();
    let p = fx.file("s.json", r#"{"a": ["-1", "1"], "b": ["1"]}"#);
    assert_eq!(code(&toda(&["evolve", "--state", p.to_str().unwrap(), "--steps", "3"])), 3);
}

#[test]
fn output_to_file() {
    let fx = Fixture::new();
    let p = fx.file("s.json", r#"{"a": ["1"], "b": []}"#);
    let out = fx.dir.path().join("out.json");
    let o = toda(&["evolve", "--state", p.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(stdout(&o).is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["trajectory"].as_array().unwrap().len(), 2);
}

#[test]
fn scatter_envelopes_of_the_worked_example() {
    let fx = Fixture::new();
    let p = fx.file("ex.json", EXAMPLE_STATE);
    let text = stdout(&toda(&["scatter", "--state", p.to_str().unwrap(), "--coeffs", "example4", "--emit", "T"]));
    let want = "\
T_1^t = 6
T_2^t = min[20, t+9]
T_3^t = min[35, t+22, 2t+13]
T_4^t = min[51, t+36, 2t+25, 3t+18]
T_5^t = min[68, t+51, 2t+38, 3t+29, 4t+24]
T_6^t = min[t+67, 2t+52, 3t+41, 4t+34]
T_7^t = min[2t+67, 3t+54, 4t+45]
T_8^t = min[3t+68, 4t+57]
T_9^t = 4t+70
";
    assert_eq!(text, want);
}

#[test]
fn scatter_u_grid_of_the_worked_example() {
    let fx = Fixture::new();
    let p = fx.file("ex.json", EXAMPLE_STATE);
    let text = stdout(&toda(&[
        "scatter",
        "--state",
        p.to_str().unwrap(),
        "--coeffs",
        "example4",
        "--emit",
        "U",
        "--t0",
        "0",
        "--t1",
        "19",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0], "0 0 0 -2 0 0 0");
    assert_eq!(rows[9], "1 1 1 1 1 1 1");
    assert_eq!(rows[10], "2 0 2 0 2 0 2");
    assert_eq!(rows[19], "0 0 0 -1 0 0 0");
    for t in 1..10 {
        assert_eq!(rows[10 + t], rows[10 - t], "t = {}", 10 + t);
    }
}

#[test]
fn scatter_report_and_json() {
    let fx = Fixture::new();
    let p = fx.file("ex.json", EXAMPLE_STATE);
    let report = stdout(&toda(&["scatter", "--state", p.to_str().unwrap()]));
    assert!(report.starts_with("Lambda = (0, 0, 0, 0, 1, 1, 1, 1)\nF = (13, 12, 11, 10, 6, 5, 4, 3)\n"));
    assert!(report.contains("genericity: yes; sign pattern: yes"));
    assert!(report.contains("T_2^t = min[20, t+9]\n"));
    let v: Value =
        serde_json::from_str(&stdout(&toda(&["scatter", "--state", p.to_str().unwrap(), "--emit", "json"]))).unwrap();
    assert_eq!(v["F"][0], "13");
}

#[test]
fn scatter_trivial_state() {
    let fx = Fixture::new();
    let p = fx.file("one.json", r#"{"A": [2], "B": []}"#);
    let text = stdout(&toda(&["scatter", "--state", p.to_str().unwrap(), "--L", "1", "--emit", "T"]));
    assert_eq!(text, "T_1^t = 0\nT_2^t = 2t\n");
    assert_eq!(code(&toda(&["scatter", "--state", p.to_str().unwrap()])), 2);
}

#[test]
fn ca_render_matches_min_plus_evolution() {
    let fx = Fixture::new();
    let p = fx.file("ca.json", KICKER_STATE);
    let p = p.to_str().unwrap();
    let ca = stdout(&toda(&["ca", "--state", p, "--steps", "7", "--render"]));
    assert_eq!(ca.lines().next(), Some("..31..2......"));
    assert_eq!(ca.lines().last(), Some(".......2211.."));
    assert_eq!(ca, stdout(&toda(&["ud-evolve", "--state", p, "--steps", "7", "--render"])));
    assert_eq!(
        stdout(&toda(&["ca", "--state", p, "--steps", "3"])),
        stdout(&toda(&["ud-evolve", "--state", p, "--steps", "3"]))
    );
    let frac = fx.file("frac.json", r#"{"A": ["1/2", 0], "B": [1]}"#);
    assert_eq!(code(&toda(&["ca", "--state", frac.to_str().unwrap()])), 2);
}

#[test]
fn tau_grid_satisfies_bilinear_form() {
    let fx = Fixture::new();
    let p = fx.file("sp.json", r#"{"lambdas": ["3", "1/2", "2"], "fs": ["-1", "2", "1/3"]}"#);
    let v: Value = serde_json::from_str(&stdout(&toda(&[
        "tau",
        "--spectral",
        p.to_str().unwrap(),
        "--t0",
        "-2",
        "--t1",
        "4",
        "--states",
    ])))
    .unwrap();
    assert_eq!(v["bilinear_exact"], true);
    assert_eq!(v["tau"].as_array().unwrap().len(), 7);
    assert_eq!(v["states"].as_array().unwrap().len(), 6);
    assert_eq!(v["lambdas"], serde_json::json!(["3", "2", "1/2"]));
}

#[test]
fn grothendieck_report() {
    let text = stdout(&toda(&["grothendieck", "--N", "4", "--gamma", "2"]));
    assert!(text.starts_with("N = 4, gamma = 2\n"));
    assert_eq!(text.lines().filter(|l| l.contains(": PASS")).count(), 4);
    assert!(!text.contains("FAIL"));
}

#[test]
fn check_suites() {
    let o = toda(&["check", "--suite", "grothendieck", "--N", "4"]);
    assert!(stdout(&o).starts_with("PASS grothendieck"));
    let o = toda(&["check", "--suite", "ca", "--exhaustive-N", "4", "--cases", "10"]);
    assert!(stdout(&o).starts_with("PASS ca (17486 cases, 0 failures)"));
    assert_eq!(code(&toda(&["check", "--suite", "nope"])), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "--suite", "tropical", "--suite", "roundtrip", "--cases", "5", "--seed", "7"];
    assert_eq!(stdout(&toda(&args)), stdout(&toda(&args)));
}
