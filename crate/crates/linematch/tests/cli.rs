use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const UNIT_PAIR: &str = r#"{"s": [0], "t": [1], "alpha": [1], "beta": [1]}"#;
const INFEASIBLE_CAPS: &str =
    r#"{"s": [0, 1, 10], "t": [2], "alpha": [1, 1, 1], "beta": [1], "cap_s": [1, 1, 1], "cap_t": [2]}"#;
const UNIT_CAPS: &str =
    r#"{"s": [4, 0], "t": [1, 2], "alpha": [1, 1], "beta": [1, 1], "cap_s": [1, 1], "cap_t": [1, 1]}"#;

fn linematch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linematch"))
        .args(args)
        .env_remove("LINEMATCH_ORACLE_GUARD")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn result_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn solve_unit_pair() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_PAIR);
    let out = dir.path().join("out.json");
    let o = linematch(&["solve", "--input", s(&inp), "--output", s(&out)]);
    assert_eq!(code(&o), 0);
    let r = result_json(&out);
    assert_eq!(r["cost"], 1);
    assert_eq!(r["pairs"], serde_json::json!([[0, 0]]));
    assert_eq!(r["mode"], "ommd");
}

#[test]
fn solve_infeasible_capacities_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", INFEASIBLE_CAPS);
    let out = dir.path().join("out.json");
    let o = linematch(&["solve", "--input", s(&inp), "--output", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn solve_rejects_malformed_files() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.json", r#"{"s": [0, 3], "t": [1], "alpha": [1], "beta": [1]}"#);
    let o = linematch(&["solve", "--input", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
    let dup = file(&dir, "dup.json", r#"{"s": [1], "t": [1], "alpha": [1], "beta": [1]}"#);
    assert_eq!(code(&linematch(&["solve", "--input", s(&dup)])), 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&linematch(&["solve", "--input", s(&missing)])), 1);
}

#[test]
fn solve_excess_demand_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", r#"{"s": [0], "t": [2, 5], "alpha": [3], "beta": [1, 1]}"#);
    assert_eq!(code(&linematch(&["solve", "--input", s(&inp)])), 2);
}

#[test]
fn solve_reports_pairs_in_file_order() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_CAPS);
    let o = linematch(&["solve", "--input", s(&inp)]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["cost"], 3);
    assert_eq!(r["mode"], "ommdc");
    assert_eq!(r["pairs"], serde_json::json!([[0, 1], [1, 0]]));
}

#[test]
fn ommdc_needs_capacities() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_PAIR);
    assert_eq!(code(&linematch(&["solve", "--input", s(&inp), "--mode", "ommdc"])), 1);
    assert_eq!(code(&linematch(&["solve", "--input", s(&inp), "--mode", "other"])), 1);
}

#[test]
fn decimal_coordinates_round_trip() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", r#"{"s": [0.5, 2], "t": [1.25], "alpha": [1, 1], "beta": [2]}"#);
    let out = dir.path().join("out.json");
    assert_eq!(code(&linematch(&["solve", "--input", s(&inp), "--output", s(&out)])), 0);
    assert_eq!(result_json(&out)["cost"], "1.50");
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&out)])), 0);
}

#[test]
fn oracle_subcommand() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_CAPS);
    let o = linematch(&["oracle", "--input", s(&inp)]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["cost"], 3);
    assert_eq!(r["solver"], "linematch-oracle");
    let inf = file(&dir, "inf.json", INFEASIBLE_CAPS);
    assert_eq!(code(&linematch(&["oracle", "--input", s(&inf)])), 2);
}

#[test]
fn oracle_guard_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_CAPS);
    let run = |guard: &str| {
        Command::new(env!("CARGO_BIN_EXE_linematch"))
            .args(["oracle", "--input", s(&inp)])
            .env("LINEMATCH_ORACLE_GUARD", guard)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("3")), 1);
    assert_eq!(code(&run("4")), 0);
    assert_eq!(code(&run("many")), 1);
}

#[test]
fn verify_outcomes() {
    let dir = TempDir::new().unwrap();
    let inp = file(&dir, "in.json", UNIT_CAPS);
    let out = dir.path().join("out.json");
    assert_eq!(code(&linematch(&["solve", "--input", s(&inp), "--output", s(&out)])), 0);
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&out)])), 0);

    let mut r = result_json(&out);
    r["cost"] = serde_json::json!(4);
    let tampered = file(&dir, "tampered.json", &r.to_string());
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&tampered)])), 2);

    let mut r = result_json(&out);
    r["pairs"] = serde_json::json!([[0, 1], [1, 7]]);
    let range = file(&dir, "range.json", &r.to_string());
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&range)])), 1);

    let mut r = result_json(&out);
    r["pairs"] = serde_json::json!([[0, 1]]);
    r["cost"] = serde_json::json!(1);
    let short = file(&dir, "short.json", &r.to_string());
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&short)])), 2);

    let other = file(&dir, "other.json", UNIT_PAIR);
    assert_eq!(code(&linematch(&["verify", "--input", s(&other), "--result", s(&out)])), 2);

    let garbage = file(&dir, "garbage.json", "not json");
    assert_eq!(code(&linematch(&["verify", "--input", s(&inp), "--result", s(&garbage)])), 1);
}

#[test]
fn fuzz_small_run() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump");
    let o = linematch(&["fuzz", "--count", "100", "--seed", "7", "--max-n", "8", "--dump-dir", s(&dump)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("100/100 matched"));
    assert!(!dump.exists());
}

#[test]
fn fuzz_capacitated_run() {
    let o = linematch(&["fuzz", "--count", "200", "--seed", "7", "--max-n", "8", "--mode", "ommdc"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("200/200 matched"));
}

#[test]
fn fuzz_guard_and_empty_run() {
    let o = linematch(&["fuzz", "--count", "10", "--max-n", "80"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
    let o = linematch(&["fuzz", "--count", "0", "--seed", "7", "--max-n", "8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0/0 matched"));
}

#[test]
fn fuzz_guard_can_be_raised() {
    let o = Command::new(env!("CARGO_BIN_EXE_linematch"))
        .args(["fuzz", "--count", "5", "--max-n", "80"])
        .env("LINEMATCH_ORACLE_GUARD", "100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("size,median_ns,ratio"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn bench_three_sizes() {
    let o = linematch(&["bench", "--sizes", "2000,4000,8000", "--reps", "3"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][2], "");
    for r in &rows[1..] {
        let ratio: f64 = r[2].parse().unwrap();
        assert!(ratio <= 4.6, "ratio {ratio}");
    }
}

#[test]
fn bench_single_and_empty() {
    let o = linematch(&["bench", "--sizes", "500", "--reps", "1"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "500");
    assert_eq!(rows[0][2], "");
    let o = linematch(&["bench", "--sizes", ""]);
    assert_eq!(code(&o), 0);
    assert!(csv_rows(&o).is_empty());
}

#[test]
fn bench_rejects_unsorted_sizes() {
    assert_eq!(code(&linematch(&["bench", "--sizes", "400,200"])), 1);
    assert_eq!(code(&linematch(&["bench", "--sizes", "a,b"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&linematch(&["bogus"])), 1);
    assert_eq!(code(&linematch(&["solve"])), 1);
    assert_eq!(code(&linematch(&["--help"])), 0);
}
