use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ghlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn two_point_pair() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("a.json"), r#"{"schema":1,"dist":[[0,1],[1,0]]}"#).unwrap();
    fs::write(dir.path().join("b.json"), r#"{"schema":1,"dist":[[0,2],[2,0]]}"#).unwrap();
    dir
}

#[test]
fn construct_cantor_writes_eight_points() {
    let dir = TempDir::new().unwrap();
    let out = ghlab(dir.path(), &["construct", "cantor", "--c", "0.5", "--depth", "3", "-o", "c.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let space = ghlab::io::read_space(dir.path().join("c.json")).unwrap();
    assert_eq!(space.len(), 8);
    let raw: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(raw["schema"], 1);
}

#[test]
fn constructed_csv_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = ghlab(dir.path(), &["construct", "triple", "--stage", "2", "--q", "0.3", "-o", "t.csv"]);
    assert_eq!(code(&out), 0);
    let space = ghlab::io::read_space(dir.path().join("t.csv")).unwrap();
    assert_eq!(space.len(), 3);
}

#[test]
fn gh_exact_on_two_point_pair() {
    let dir = two_point_pair();
    let out = ghlab(dir.path(), &["gh", "exact", "a.json", "b.json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["lower"], 0.5);
    assert_eq!(v["upper"], 0.5);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness_pairs"].as_array().unwrap().len(), 2);
}

#[test]
fn gh_bound_is_seed_deterministic() {
    let dir = TempDir::new().unwrap();
    let make = |name: &str, c: &str, depth: &str| {
        let out = ghlab(dir.path(), &["construct", "cantor", "--c", c, "--depth", depth, "-o", name]);
        assert_eq!(code(&out), 0);
    };
    make("x.json", "0.5", "3");
    make("y.json", "0.3", "2");
    let args = ["gh", "bound", "x.json", "y.json", "--restarts", "6", "--seed", "11"];
    let first = ghlab(dir.path(), &args);
    let second = ghlab(dir.path(), &args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let v = stdout_json(&first);
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
}

#[test]
fn analyze_reports_cantor_invariants() {
    let dir = TempDir::new().unwrap();
    ghlab(dir.path(), &["construct", "cantor", "--c", "0.5", "--depth", "4", "-o", "c.json"]);
    let out = ghlab(dir.path(), &["analyze", "c.json", "--t", "0.125"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ud_delta"], 1.0);
    assert!(v["up_c"].as_f64().unwrap() >= 0.5);
    assert!((v["doubling_beta"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn sweep_depth_emits_one_row_per_depth() {
    let dir = TempDir::new().unwrap();
    let out = ghlab(dir.path(), &["analyze", "--sweep-depth", "--c", "0.25", "--depth", "5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "depth,points,ud_delta,up_c,assouad,doubling_C");
    assert_eq!(lines.len(), 1 + 4);
    assert!(lines[4].starts_with("5,32,1,"));
}

#[test]
fn straight_geodesic_report_and_csv() {
    let dir = two_point_pair();
    let out = ghlab(
        dir.path(),
        &["geodesic", "straight", "a.json", "b.json", "--grid", "5", "--csv", "g.csv", "--samples-dir", "samples"],
    );
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert!(v["report"]["max_excess"].as_f64().unwrap() <= 1e-9);
    let csv = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("s,t,upper,lower,bound"));
    assert_eq!(csv.lines().count(), 1 + 10);
    assert_eq!(fs::read_dir(dir.path().join("samples")).unwrap().count(), 5);
}

fn bunch_dir() -> TempDir {
    let dir = two_point_pair();
    fs::write(
        dir.path().join("bunch.json"),
        r#"{"schema":1,"x":"a.json","y":{"dist":[[0,2,2],[2,0,2],[2,2,0]]},
            "branch_set":[0,0.5,1],"tail":{"depth":2}}"#,
    )
    .unwrap();
    dir
}

#[test]
fn bunch_passes_and_is_byte_identical_per_seed() {
    let dir = bunch_dir();
    let args = |o: &'static str, c: &'static str| {
        [
            "geodesic", "bunch", "bunch.json", "--s-grid", "5", "--q-samples", "4", "--seed", "3", "-o", o, "--csv", c,
        ]
    };
    assert_eq!(code(&ghlab(dir.path(), &args("r1.json", "r1.csv"))), 0);
    assert_eq!(code(&ghlab(dir.path(), &args("r2.json", "r2.csv"))), 0);
    let read = |name: &str| fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("r1.json"), read("r2.json"));
    assert_eq!(read("r1.csv"), read("r2.csv"));
    let v: Value = serde_json::from_slice(&read("r1.json")).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["curves"].as_array().unwrap().len(), 4);
    assert_eq!(v["branch_agreement"][0]["agree"], true);
    assert_eq!(v["distinctness"]["report"]["isometric"], 0);
}

#[test]
fn bunch_with_oversized_factor_is_an_input_error() {
    let dir = bunch_dir();
    fs::write(
        dir.path().join("wide.json"),
        r#"{"x":"a.json","y":"b.json","factor":{"dist":[[0,3],[3,0]]},"branch_set":[0,1],"tail":{"depth":1}}"#,
    )
    .unwrap();
    let out = ghlab(dir.path(), &["geodesic", "bunch", "wide.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn run_executes_an_experiment_file() {
    let dir = two_point_pair();
    fs::write(
        dir.path().join("exp.json"),
        r#"{"schema":1,"kind":"geodesic","inputs":["a.json","b.json"],"params":{"grid":4},"seed":1,"output":"out/geo.json"}"#,
    )
    .unwrap();
    let out = ghlab(dir.path(), &["run", "exp.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/geo.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(dir.path().join("out/geo.csv").exists());
}

#[test]
fn run_construct_experiment() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("exp.json"),
        r#"{"kind":"construct","params":{"kind":"u-space","q":[0.2,0.9]},"output":"u.json"}"#,
    )
    .unwrap();
    assert_eq!(code(&ghlab(dir.path(), &["run", "exp.json"])), 0);
    let space = ghlab::io::read_space(dir.path().join("u.json")).unwrap();
    assert_eq!(space.len(), 1 + 2 * 3);
}

#[test]
fn missing_input_is_exit_two() {
    let dir = two_point_pair();
    let out = ghlab(dir.path(), &["gh", "exact", "a.json", "nope.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.json"));
    fs::write(dir.path().join("exp.json"), r#"{"kind":"gh","inputs":["a.json","gone.json"],"output":"o.json"}"#).unwrap();
    assert_eq!(code(&ghlab(dir.path(), &["run", "exp.json"])), 2);
}

#[test]
fn invalid_metric_is_exit_two() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"dist":[[0,1,5],[1,0,1],[5,1,0]]}"#).unwrap();
    let out = ghlab(dir.path(), &["analyze", "bad.json"]);
    assert_eq!(code(&out), 2);
    fs::write(dir.path().join("v2.json"), r#"{"schema":2,"dist":[[0]]}"#).unwrap();
    assert_eq!(code(&ghlab(dir.path(), &["analyze", "v2.json", "--t", "1"])), 2);
}

#[test]
fn point_cap_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ghlab"))
        .current_dir(dir.path())
        .env("GHLAB_MAX_POINTS", "4")
        .args(["construct", "cantor", "--c", "0.5", "--depth", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn reproduce_writes_a_passing_summary() {
    let dir = TempDir::new().unwrap();
    let out = ghlab(dir.path(), &["reproduce", "--out-dir", "rep", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    assert!(criteria.iter().all(|c| c["passed"] == true));
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("rep/summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, v);
}

#[test]
fn reproduce_with_injected_fault_fails_that_criterion() {
    let dir = TempDir::new().unwrap();
    let out = ghlab(dir.path(), &["reproduce", "--inject-fault", "5", "--json"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);
    for c in v["criteria"].as_array().unwrap() {
        assert_eq!(c["passed"], c["id"] != 5, "{c}");
    }
}
