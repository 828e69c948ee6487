//! Acceptance criteria 1-7. Each test prints one `PASS` or `FAIL` line.

use std::fs;
use std::io::Write;
use std::process::Command;
use std::sync::Mutex;

use linematch::bench;
use linematch::fuzz::{self, FuzzConfig};
use linematch_core::oracle::{exhaustive_solve, oracle_solve, OracleError};
use linematch_core::structure::structural_violations;
use linematch_core::{
    boundary_point, feasibility_flow_check, matching_cost, min_pair_count, partition, solve, solve_ommd,
    solve_ommdc, validate_matching, Instance, InstanceError, Matching, Mode, PointRef, RawInstance, Side,
    SolveError,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

static SERIAL: Mutex<()> = Mutex::new(());

const GUARD: usize = 64;
const EQUIVALENCE_COUNT: u64 = 10_000;

fn verdict(n: u32, title: &str, ok: bool, detail: &str) {
    let line =
        format!("acceptance criterion {n} ({title}): {} | {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

struct Eval {
    agreed: bool,
    infeasible: bool,
    violations: usize,
}

fn evaluate(inst: &Instance, mode: Mode) -> Eval {
    match (solve(inst, mode), oracle_solve(inst, mode, GUARD)) {
        (Ok(sol), Ok(best)) => {
            let m = &sol.matching;
            let dup = m.pairs().windows(2).filter(|w| w[0] >= w[1]).count();
            let short = usize::from((m.len() as u64) < min_pair_count(inst));
            Eval {
                agreed: sol.cost() == best.cost(),
                infeasible: false,
                violations: validate_matching(inst, m, mode).violations.len()
                    + dup
                    + short
                    + structural_violations(inst, m, mode).len(),
            }
        }
        (
            Err(SolveError::InfeasibleDemand { .. } | SolveError::InfeasibleCapacity),
            Err(OracleError::Infeasible { .. }),
        ) => Eval { agreed: true, infeasible: true, violations: 0 },
        _ => Eval { agreed: false, infeasible: false, violations: 0 },
    }
}

/// `(mismatches, infeasible, invariant violations)` over the seeded stream.
fn equivalence(seed: u64, mode: Mode) -> (usize, usize, usize) {
    (0..EQUIVALENCE_COUNT)
        .into_par_iter()
        .map(|i| {
            let e = evaluate(&fuzz::generate(seed, i, 10, mode), mode);
            (usize::from(!e.agreed), usize::from(e.infeasible), e.violations)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
}

#[test]
fn criterion_1_oracle_equivalence_ommd() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (bad, infeasible, _) = equivalence(1, Mode::DemandOnly);
    verdict(
        1,
        "oracle equivalence, OMMD",
        bad == 0 && infeasible == 0,
        &format!("{bad} mismatches, {infeasible} infeasible in {EQUIVALENCE_COUNT} instances"),
    );
}

#[test]
fn criterion_2_oracle_equivalence_ommdc() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (bad, infeasible, _) = equivalence(2, Mode::DemandAndCapacity);
    verdict(
        2,
        "oracle equivalence, OMMDC",
        bad == 0,
        &format!("{bad} mismatches in {EQUIVALENCE_COUNT} instances ({infeasible} infeasible on both sides)"),
    );
}

/// Distinct coordinates in `[0, 100]`, `y * z <= 20`, demands up to 3.
fn small_instance(rng: &mut ChaCha8Rng, mode: Mode) -> Instance {
    let shapes: Vec<(usize, usize)> =
        (1..=20).flat_map(|y| (1..=20).map(move |z| (y, z))).filter(|&(y, z)| y * z <= 20).collect();
    let (y, z) = shapes[rng.random_range(0..shapes.len())];
    let coords: Vec<i64> = sample(rng, 101, y + z).into_iter().map(|c| c as i64).collect();
    let alpha: Vec<i64> = (0..y).map(|_| rng.random_range(1..=3.min(z) as i64)).collect();
    let beta: Vec<i64> = (0..z).map(|_| rng.random_range(1..=3.min(y) as i64)).collect();
    let mut raw =
        RawInstance::demands(coords[..y].to_vec(), alpha.clone(), coords[y..].to_vec(), beta.clone());
    if mode == Mode::DemandAndCapacity {
        let cs = alpha.iter().map(|&d| d + rng.random_range(0..=2)).collect();
        let ct = beta.iter().map(|&d| d + rng.random_range(0..=2)).collect();
        raw = raw.with_caps(cs, ct);
    }
    raw.validate().unwrap()
}

#[test]
fn criterion_3_oracle_self_consistency() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Instance, Mode)> = (0..1000)
        .map(|k| {
            let mode = if k % 2 == 0 { Mode::DemandOnly } else { Mode::DemandAndCapacity };
            (small_instance(&mut rng, mode), mode)
        })
        .collect();
    let bad = cases
        .par_iter()
        .filter(|(inst, mode)| {
            let a = oracle_solve(inst, *mode, GUARD).map(|s| s.cost());
            let b = exhaustive_solve(inst, *mode).map(|s| s.cost());
            a != b
        })
        .count();
    verdict(
        3,
        "oracle self-consistency",
        bad == 0,
        &format!("{bad} disagreements in {} instances with y*z <= 20", cases.len()),
    );
}

#[test]
fn criterion_4_structural_invariants() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (_, _, a) = equivalence(1, Mode::DemandOnly);
    let (_, _, b) = equivalence(2, Mode::DemandAndCapacity);
    verdict(
        4,
        "structural invariants",
        a + b == 0,
        &format!("{a} violations in OMMD outputs, {b} in OMMDC outputs"),
    );
}

#[test]
fn criterion_5_quadratic_scaling() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut ok = true;
    let mut detail = Vec::new();
    for mode in [Mode::DemandOnly, Mode::DemandAndCapacity] {
        let rows = bench::run(&[2000, 4000, 8000], 5, mode, 5).unwrap();
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
        let last = rows.last().unwrap().median_ns as f64 / 1e9;
        ok &= ratios.iter().all(|&r| r <= 4.6) && last < 10.0;
        detail.push(format!(
            "{mode}: ratios {} at 2000->4000->8000, n=8000 median {last:.3} s",
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
        ));
    }
    verdict(5, "quadratic scaling", ok, &detail.join("; "));
}

fn raw(s: &[i64], a: &[i64], t: &[i64], b: &[i64]) -> RawInstance {
    RawInstance::demands(s.to_vec(), a.to_vec(), t.to_vec(), b.to_vec())
}

fn inst(s: &[i64], a: &[i64], t: &[i64], b: &[i64]) -> Instance {
    raw(s, a, t, b).validate().unwrap()
}

fn capped(s: &[i64], a: &[i64], cs: &[i64], t: &[i64], b: &[i64], ct: &[i64]) -> Instance {
    raw(s, a, t, b).with_caps(cs.to_vec(), ct.to_vec()).validate().unwrap()
}

fn library_examples() -> Vec<(&'static str, bool)> {
    let two = inst(&[1, 5], &[1, 1], &[2, 3], &[1, 1]);
    let unit_caps = capped(&[0, 4], &[1, 1], &[1, 1], &[1, 2], &[1, 1], &[1, 1]);
    let crowded = capped(&[0, 1, 10], &[1, 1, 1], &[1, 1, 1], &[2], &[1], &[2]);
    let part = partition(&inst(&[1, 3, 4], &[1, 1, 1], &[2, 5], &[1, 1])).unwrap();
    let sides = |p: &linematch_core::BlockPartition| {
        p.blocks.iter().map(|b| (b.side, b.points.clone())).collect::<Vec<_>>()
    };
    let fan_m = Matching::from_pairs(&inst(&[0], &[1], &[2, 3], &[1, 1]), [(0, 0), (0, 1)]).unwrap();
    let unit = inst(&[0], &[1], &[1], &[1]);
    vec![
        ("normalization sorts and carries demands", {
            let n = raw(&[3, 1], &[2, 1], &[2], &[1]).normalize_structure().unwrap();
            n.instance.s_coords() == [1, 3] && n.instance.alpha() == [1, 2]
        }),
        (
            "coincident points are rejected",
            raw(&[1], &[1], &[1], &[1]).validate() == Err(InstanceError::DuplicateCoordinate { value: 1 }),
        ),
        (
            "excess demand is infeasible",
            matches!(
                raw(&[0], &[3], &[2, 5], &[1, 1]).validate(),
                Err(InstanceError::InfeasibleDemand { demand: 3, available: 2, .. })
            ),
        ),
        ("cost of two pairs", matching_cost(&two, &[(0, 0), (1, 1)]) == Ok(3)),
        ("cost of no pairs", matching_cost(&two, &[]) == Ok(0)),
        ("cost of a fan", fan_m.total_cost() == 5),
        (
            "unit pair is feasible",
            validate_matching(&unit, &Matching::from_pairs(&unit, [(0, 0)]).unwrap(), Mode::DemandOnly)
                .feasible(),
        ),
        (
            "empty matching has two violations",
            validate_matching(&unit, &Matching::empty(&unit), Mode::DemandOnly).violations.len() == 2,
        ),
        ("capacity is enforced", {
            let i = capped(&[0], &[1], &[1], &[2, 3], &[1, 1], &[1, 1]);
            let m = Matching::from_pairs(&i, [(0, 0), (0, 1)]).unwrap();
            !validate_matching(&i, &m, Mode::DemandAndCapacity).feasible()
        }),
        ("pair lower bound, unit", min_pair_count(&two) == 2),
        ("pair lower bound, fan", min_pair_count(&inst(&[0], &[2], &[1, 2], &[1, 1])) == 2),
        ("pair lower bound, uneven", {
            min_pair_count(&raw(&[0, 1], &[3, 1], &[2], &[1]).normalize_structure().unwrap().instance) == 4
        }),
        (
            "partition into alternating runs",
            sides(&part)
                == vec![(Side::S, vec![0]), (Side::T, vec![0]), (Side::S, vec![1, 2]), (Side::T, vec![1])],
        ),
        ("partition of two runs", {
            let p = partition(&inst(&[1, 2], &[1, 1], &[5], &[2])).unwrap();
            sides(&p) == vec![(Side::S, vec![0, 1]), (Side::T, vec![0])]
        }),
        ("partition of one side", {
            let i = raw(&[1], &[1], &[], &[]).normalize_structure().unwrap().instance;
            sides(&partition(&i).unwrap()) == vec![(Side::S, vec![0])]
        }),
        ("boundary point of A_2", boundary_point(&part, 2) == Ok(Some(PointRef::t(0)))),
        ("no boundary point for A_0", boundary_point(&part, 0) == Ok(None)),
        ("boundary point of A_3", boundary_point(&part, 3) == Ok(Some(PointRef::s(2)))),
        ("OMMD single pair", solve_ommd(&unit).map(|s| s.cost()) == Ok(1)),
        (
            "OMMD two by two",
            solve_ommd(&two).map(|s| (s.cost(), s.matching.pairs().to_vec()))
                == Ok((3, vec![(0, 0), (1, 1)])),
        ),
        ("OMMD fan", solve_ommd(&inst(&[0], &[2], &[2, 3], &[1, 1])).map(|s| s.cost()) == Ok(5)),
        (
            "OMMD forced star",
            solve_ommd(&inst(&[0, 1, 10], &[1, 1, 1], &[2], &[2])).map(|s| s.cost()) == Ok(11),
        ),
        (
            "OMMDC unit caps",
            solve_ommdc(&unit_caps).map(|s| (s.cost(), s.matching.pairs().to_vec()))
                == Ok((3, vec![(0, 0), (1, 1)])),
        ),
        ("OMMDC infeasible", solve_ommdc(&crowded) == Err(SolveError::InfeasibleCapacity)),
        (
            "feasibility, unit",
            feasibility_flow_check(&capped(&[0, 2], &[1, 1], &[2, 2], &[1, 3], &[1, 1], &[2, 2])),
        ),
        ("feasibility, crowded", !feasibility_flow_check(&crowded)),
        ("feasibility, fan", feasibility_flow_check(&capped(&[0], &[2], &[2], &[1, 2], &[1, 1], &[1, 1]))),
        ("oracle two by two", oracle_solve(&two, Mode::DemandOnly, GUARD).map(|s| s.cost()) == Ok(3)),
        (
            "oracle unit caps",
            oracle_solve(&unit_caps, Mode::DemandAndCapacity, GUARD).map(|s| s.cost()) == Ok(3),
        ),
        ("exhaustive single pair", exhaustive_solve(&unit, Mode::DemandOnly).map(|s| s.cost()) == Ok(1)),
        ("exhaustive two by two", exhaustive_solve(&two, Mode::DemandOnly).map(|s| s.cost()) == Ok(3)),
        (
            "exhaustive infeasible",
            matches!(
                exhaustive_solve(&crowded, Mode::DemandAndCapacity),
                Err(OracleError::Infeasible { .. })
            ),
        ),
    ]
}

fn cli_examples() -> Vec<(&'static str, bool)> {
    let dir = tempfile::TempDir::new().unwrap();
    let path = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_linematch"))
            .args(args)
            .env_remove("LINEMATCH_ORACLE_GUARD")
            .output()
            .unwrap();
        (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
    };
    let unit = path("unit.json", r#"{"s": [0], "t": [1], "alpha": [1], "beta": [1]}"#);
    let crowded = path(
        "crowded.json",
        r#"{"s": [0, 1, 10], "t": [2], "alpha": [1, 1, 1], "beta": [1], "cap_s": [1, 1, 1], "cap_t": [2]}"#,
    );
    let bad = path("bad.json", r#"{"s": [0, 3], "t": [1], "alpha": [1], "beta": [1]}"#);
    let out = dir.path().join("out.json").to_str().unwrap().to_owned();
    let none = dir.path().join("none.json").to_str().unwrap().to_owned();

    let solved = run(&["solve", "--input", &unit, "--output", &out]).0 == 0;
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap_or_default()).unwrap_or_default();
    let mut tampered = result.clone();
    tampered["cost"] = serde_json::json!(2);
    let tampered = path("tampered.json", &tampered.to_string());
    let mut range = result.clone();
    range["pairs"] = serde_json::json!([[0, 3]]);
    let range = path("range.json", &range.to_string());
    let bench_rows = |sizes: &str| {
        let (code, text) = run(&["bench", "--sizes", sizes, "--reps", "3"]);
        let rows: Vec<Vec<String>> =
            text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect();
        (code, rows)
    };
    let (c3, three) = bench_rows("2000,4000,8000");
    let (c1, one) = bench_rows("1000");
    let (c0, zero) = bench_rows("");
    vec![
        ("solve unit pair", solved && result["cost"] == 1),
        ("solve infeasible capacities", {
            run(&["solve", "--input", &crowded, "--output", &none]).0 == 2
                && !std::path::Path::new(&none).exists()
        }),
        ("solve malformed file", run(&["solve", "--input", &bad]).0 == 1),
        ("fuzz small run", {
            let (code, text) = run(&["fuzz", "--count", "100", "--seed", "7", "--max-n", "8"]);
            code == 0 && text.contains("100/100 matched")
        }),
        ("fuzz guard", run(&["fuzz", "--count", "1", "--max-n", "80"]).0 == 1),
        ("fuzz empty run", run(&["fuzz", "--count", "0"]).0 == 0),
        (
            "bench three sizes",
            c3 == 0
                && three.len() == 3
                && three[0][2].is_empty()
                && three[1..].iter().all(|r| r[2].parse::<f64>().is_ok_and(|x| x <= 4.6)),
        ),
        ("bench single size", c1 == 0 && one.len() == 1 && one[0][2].is_empty()),
        ("bench empty list", c0 == 0 && zero.is_empty()),
        ("verify solver output", run(&["verify", "--input", &unit, "--result", &out]).0 == 0),
        ("verify tampered cost", run(&["verify", "--input", &unit, "--result", &tampered]).0 == 2),
        ("verify pair out of range", run(&["verify", "--input", &unit, "--result", &range]).0 == 1),
    ]
}

#[test]
fn criterion_6_worked_examples() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let all: Vec<(&str, bool)> = library_examples().into_iter().chain(cli_examples()).collect();
    let failed: Vec<&str> = all.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let detail = if failed.is_empty() {
        format!("{} examples", all.len())
    } else {
        format!("{} of {} examples failed: {}", failed.len(), all.len(), failed.join(", "))
    };
    verdict(6, "worked examples", failed.is_empty(), &detail);
}

#[test]
fn criterion_7_determinism() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::TempDir::new().unwrap();
    let input = dir.path().join("in.json");
    let inst = fuzz::generate(9, 0, 10, Mode::DemandAndCapacity);
    let text = linematch::format::InstanceFile::from_instance(&inst).to_json();
    fs::write(&input, text).unwrap();
    let solve_bytes = |name: &str| {
        let out = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_linematch"))
            .args(["solve", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()])
            .output()
            .unwrap();
        (o.status.code(), fs::read(&out).ok())
    };
    let same_solve = solve_bytes("a.json") == solve_bytes("b.json");

    let fuzz_run = || {
        let o = Command::new(env!("CARGO_BIN_EXE_linematch"))
            .args(["fuzz", "--count", "300", "--seed", "42", "--max-n", "10", "--mode", "ommdc"])
            .env_remove("LINEMATCH_ORACLE_GUARD")
            .output()
            .unwrap();
        (o.status.code(), o.stdout)
    };
    let same_fuzz = fuzz_run() == fuzz_run();

    let stream = |seed| -> Vec<String> {
        (0..200)
            .map(|i| {
                linematch::format::InstanceFile::from_instance(&fuzz::generate(seed, i, 10, Mode::DemandOnly))
                    .to_json()
            })
            .collect()
    };
    let same_stream = stream(42) == stream(42);
    let cfg = FuzzConfig { count: 300, seed: 42, max_n: 10, mode: Mode::DemandOnly, guard: GUARD };
    let same_report = fuzz::run(&cfg) == fuzz::run(&cfg);

    verdict(
        7,
        "determinism",
        same_solve && same_fuzz && same_stream && same_report,
        &format!(
            "solve bytes identical: {same_solve}, fuzz outcome identical: {same_fuzz}, \
             instance stream identical: {same_stream}, fuzz report identical: {same_report}"
        ),
    );
}
