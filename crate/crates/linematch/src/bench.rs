//! Wall-clock scaling of the solver.

use std::fmt;
use std::time::Instant;

use linematch_core::{feasibility_flow_check, solve, Instance, Mode, RawInstance};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub median_ns: u128,
    /// Median time over the previous row's; absent on the first row.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BenchError {
    NotAscending { prev: usize, next: usize },
    TooSmall { size: usize },
    NoRepetitions,
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::NotAscending { prev, next } => {
                write!(f, "sizes must be strictly ascending ({next} follows {prev})")
            }
            BenchError::TooSmall { size } => {
                write!(f, "size {size} is below 2; both sides need a point")
            }
            BenchError::NoRepetitions => f.write_str("reps must be at least 1"),
        }
    }
}

impl std::error::Error for BenchError {}

/// `n` points with unit demands, distinct coordinates in `0..10n` and sides
/// drawn independently, so blocks interleave at random. In capacity mode each
/// point may take up to three partners; draws the capacities cannot serve
/// are redrawn.
pub fn instance(n: usize, mode: Mode, rng: &mut ChaCha8Rng) -> Instance {
    loop {
        let mut coords: Vec<i64> = sample(rng, 10 * n, n).into_iter().map(|c| c as i64).collect();
        coords.sort_unstable();
        let (s, t): (Vec<i64>, Vec<i64>) = coords.into_iter().partition(|_| rng.random_bool(0.5));
        if s.is_empty() || t.is_empty() {
            continue;
        }
        let (y, z) = (s.len(), t.len());
        let mut raw = RawInstance::demands(s, vec![1; y], t, vec![1; z]);
        if mode == Mode::DemandAndCapacity {
            raw = raw.with_caps(vec![3; y], vec![3; z]);
        }
        let inst = raw.validate().expect("generated instances are well formed");
        if feasibility_flow_check(&inst) {
            return inst;
        }
    }
}

pub fn run(sizes: &[usize], reps: usize, mode: Mode, seed: u64) -> Result<Vec<BenchRow>, BenchError> {
    if reps == 0 && !sizes.is_empty() {
        return Err(BenchError::NoRepetitions);
    }
    for w in sizes.windows(2) {
        if w[1] <= w[0] {
            return Err(BenchError::NotAscending { prev: w[0], next: w[1] });
        }
    }
    if let Some(&size) = sizes.iter().find(|&&s| s < 2) {
        return Err(BenchError::TooSmall { size });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<BenchRow> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut times: Vec<u128> = (0..reps)
            .map(|_| {
                let inst = instance(size, mode, &mut rng);
                let start = Instant::now();
                let sol = solve(&inst, mode).expect("bench instances are feasible");
                let elapsed = start.elapsed().as_nanos();
                std::hint::black_box(sol);
                elapsed
            })
            .collect();
        times.sort_unstable();
        let median_ns = times[(times.len() - 1) / 2];
        let ratio = rows.last().map(|p| median_ns as f64 / p.median_ns.max(1) as f64);
        rows.push(BenchRow { size, median_ns, ratio });
    }
    Ok(rows)
}

/// CSV with a `size,median_ns,ratio` header; the ratio cell of the first
/// row is empty.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("size,median_ns,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", r.size, r.median_ns, ratio));
    }
    out
}
