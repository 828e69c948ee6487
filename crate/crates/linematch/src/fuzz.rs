//! Differential testing of the solver against the circulation oracle.

use std::fmt;

use linematch_core::oracle::{oracle_solve, OracleError};
use linematch_core::structure::structural_violations;
use linematch_core::{min_pair_count, solve, validate_matching, Instance, Mode, RawInstance, SolveError};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Coordinates are drawn from `0..=COORD_MAX`.
pub const COORD_MAX: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub count: usize,
    pub seed: u64,
    pub max_n: usize,
    pub mode: Mode,
    /// Largest instance the oracle accepts.
    pub guard: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuzzError {
    AboveGuard { max_n: usize, guard: usize },
    TooSmall { max_n: usize },
    TooLarge { max_n: usize },
}

impl fmt::Display for FuzzError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzError::AboveGuard { max_n, guard } => write!(
                f,
                "max-n {max_n} exceeds the oracle size guard {guard} (set LINEMATCH_ORACLE_GUARD to raise it)"
            ),
            FuzzError::TooSmall { max_n } => write!(f, "max-n {max_n} is below 2; both sides need a point"),
            FuzzError::TooLarge { max_n } => {
                write!(f, "max-n {max_n} exceeds the {} distinct coordinates available", COORD_MAX + 1)
            }
        }
    }
}

impl std::error::Error for FuzzError {}

/// Instance `index` of the stream for `seed`. Each index has its own ChaCha
/// stream, so the sequence does not depend on how the work is scheduled.
pub fn generate(seed: u64, index: u64, max_n: usize, mode: Mode) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.random_range(2..=max_n);
    let mut coords: Vec<i64> = sample(&mut rng, COORD_MAX + 1, n).into_iter().map(|c| c as i64).collect();
    coords.sort_unstable();
    let y = rng.random_range(1..n);
    let mut on_s = vec![false; n];
    for k in sample(&mut rng, n, y) {
        on_s[k] = true;
    }
    let pick = |side: bool| -> Vec<i64> { (0..n).filter(|&k| on_s[k] == side).map(|k| coords[k]).collect() };
    let (s, t) = (pick(true), pick(false));
    let mut demands = |len: usize, other: usize| -> Vec<i64> {
        (0..len).map(|_| rng.random_range(1..=3.min(other) as i64)).collect()
    };
    let alpha = demands(s.len(), t.len());
    let beta = demands(t.len(), s.len());
    let mut raw = RawInstance::demands(s, alpha.clone(), t, beta.clone());
    if mode == Mode::DemandAndCapacity {
        let cs = alpha.iter().map(|&d| d + rng.random_range(0..=2)).collect();
        let ct = beta.iter().map(|&d| d + rng.random_range(0..=2)).collect();
        raw = raw.with_caps(cs, ct);
    }
    raw.validate().expect("generated instances are well formed")
}

/// Compares the solver with the oracle on one instance. `Err` describes a
/// disagreement or an invalid solver output.
pub fn check(inst: &Instance, mode: Mode, guard: usize) -> Result<(), String> {
    match (solve(inst, mode), oracle_solve(inst, mode, guard)) {
        (Ok(sol), Ok(best)) => {
            if sol.cost() != best.cost() {
                return Err(format!("solver cost {} but oracle cost {}", sol.cost(), best.cost()));
            }
            let report = validate_matching(inst, &sol.matching, mode);
            if let Some(v) = report.violations.first() {
                return Err(format!("solver output violates {v}"));
            }
            if let Some(v) = structural_violations(inst, &sol.matching, mode).first() {
                return Err(format!("solver output contains {v}"));
            }
            if (sol.matching.len() as u64) < min_pair_count(inst) {
                return Err(format!("solver output has only {} pairs", sol.matching.len()));
            }
            Ok(())
        }
        (
            Err(SolveError::InfeasibleDemand { .. } | SolveError::InfeasibleCapacity),
            Err(OracleError::Infeasible { .. }),
        ) => Ok(()),
        (a, b) => Err(format!(
            "solver {} but oracle {}",
            a.map_or_else(|e| e.to_string(), |s| format!("cost {}", s.cost())),
            b.map_or_else(|e| e.to_string(), |s| format!("cost {}", s.cost())),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: u64,
    pub instance: Instance,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub count: usize,
    pub matched: usize,
    pub mismatches: Vec<Mismatch>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} matched", self.matched, self.count)
    }
}

pub fn run(cfg: &FuzzConfig) -> Result<FuzzReport, FuzzError> {
    if cfg.max_n > cfg.guard {
        return Err(FuzzError::AboveGuard { max_n: cfg.max_n, guard: cfg.guard });
    }
    if cfg.max_n < 2 {
        return Err(FuzzError::TooSmall { max_n: cfg.max_n });
    }
    if cfg.max_n > COORD_MAX + 1 {
        return Err(FuzzError::TooLarge { max_n: cfg.max_n });
    }
    let mismatches: Vec<Mismatch> = (0..cfg.count as u64)
        .into_par_iter()
        .filter_map(|index| {
            let instance = generate(cfg.seed, index, cfg.max_n, cfg.mode);
            check(&instance, cfg.mode, cfg.guard).err().map(|detail| Mismatch { index, instance, detail })
        })
        .collect();
    Ok(FuzzReport { count: cfg.count, matched: cfg.count - mismatches.len(), mismatches })
}
