//! `linematch` subcommands.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 infeasible instance or a
//! result that does not verify, 3 fuzz counterexample.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use linematch_core::oracle::{oracle_solve, OracleError};
use linematch_core::{solve, validate_matching, Matching, MatchingError, Mode, Solution, SolveError};

use crate::bench;
use crate::format::{FormatError, InstanceFile, Loaded, ResultFile};
use crate::fuzz::{self, FuzzConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

pub const GUARD_VAR: &str = "LINEMATCH_ORACLE_GUARD";
pub use linematch_core::oracle::DEFAULT_GUARD;

pub const SOLVER_ID: &str = "linematch-exact";
pub const ORACLE_ID: &str = "linematch-oracle";

#[derive(Debug, Parser)]
#[command(name = "linematch", version, about = "Minimum-cost many-to-many matching on the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file and write a result file.
    Solve(SolveArgs),
    /// Check a result file against its instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Result file to check.
        #[arg(long, alias = "output")]
        result: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
    },
    /// Solve an instance file with the min-cost circulation oracle.
    Oracle(SolveArgs),
    /// Compare the solver with the oracle on random instances.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, value_parser = parse_mode, default_value = "ommd")]
        mode: Mode,
        /// Directory that receives mismatching instances.
        #[arg(long, default_value = "fuzz-mismatches")]
        dump_dir: PathBuf,
    },
    /// Median solve time per size, as CSV.
    Bench {
        /// Comma-separated ascending sizes.
        #[arg(long, default_value = "2000,4000,8000")]
        sizes: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, value_parser = parse_mode, default_value = "ommd")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// Result path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Defaults to `ommdc` when the file has capacities, `ommd` otherwise.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: linematch_core::UnknownMode| e.to_string())
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn infeasible(message: impl ToString) -> Self {
        Failure { code: EXIT_INFEASIBLE, message: message.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::usage(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(&a, false),
        Command::Oracle(a) => cmd_solve(&a, true),
        Command::Verify { input, result, mode } => cmd_verify(&input, &result, mode),
        Command::Fuzz { count, seed, max_n, mode, dump_dir } => cmd_fuzz(count, seed, max_n, mode, &dump_dir),
        Command::Bench { sizes, reps, mode, seed, output } => {
            cmd_bench(&sizes, reps, mode, seed, output.as_deref())
        }
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    Ok(InstanceFile::parse(&read(path)?)?.load()?)
}

fn resolve_mode(flag: Option<Mode>, loaded: &Loaded) -> Result<Mode, Failure> {
    match flag {
        Some(Mode::DemandAndCapacity) if !loaded.instance().has_caps() => {
            Err(Failure::usage("mode ommdc needs cap_s and cap_t in the instance file"))
        }
        Some(m) => Ok(m),
        None => Ok(loaded.default_mode()),
    }
}

pub fn guard_from_env() -> Result<usize, String> {
    match std::env::var(GUARD_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{GUARD_VAR}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

fn cmd_solve(args: &SolveArgs, oracle: bool) -> Outcome {
    let loaded = load(&args.input)?;
    let mode = resolve_mode(args.mode, &loaded)?;
    let inst = loaded.instance();
    let (sol, solver): (Solution, &str) = if oracle {
        let guard = guard_from_env().map_err(Failure::usage)?;
        match oracle_solve(inst, mode, guard) {
            Ok(sol) => (sol, ORACLE_ID),
            Err(e @ OracleError::SizeGuardExceeded { .. }) => return Err(Failure::usage(e)),
            Err(e) => return Err(Failure::infeasible(e)),
        }
    } else {
        match solve(inst, mode) {
            Ok(sol) => (sol, SOLVER_ID),
            Err(e @ SolveError::Internal(_)) => return Err(Failure::usage(e)),
            Err(e) => return Err(Failure::infeasible(e)),
        }
    };
    let text = ResultFile::new(&loaded, &sol, solver).to_json();
    match &args.output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(input: &Path, result: &Path, mode: Option<Mode>) -> Outcome {
    let loaded = load(input)?;
    let res = ResultFile::parse(&read(result)?)?;
    if res.instance_digest != loaded.digest {
        return Err(Failure::infeasible("result was computed for a different instance"));
    }
    let mode = match mode {
        Some(m) => m,
        None => parse_mode(&res.mode).map_err(Failure::usage)?,
    };
    let mode = resolve_mode(Some(mode), &loaded)?;
    let pairs = loaded.rank_pairs(&res.pairs)?;
    let inst = loaded.instance();
    let m = Matching::from_pairs(inst, pairs).map_err(|e| match e {
        MatchingError::DuplicatePair { .. } => Failure::infeasible(e),
        MatchingError::IndexOutOfRange { .. } => Failure::usage(e),
    })?;
    let report = validate_matching(inst, &m, mode);
    if let Some(v) = report.violations.first() {
        return Err(Failure::infeasible(format!(
            "matching is infeasible: {v} ({} violation(s))",
            report.violations.len()
        )));
    }
    let actual = loaded.cost_value(m.total_cost());
    if res.scaled_cost(loaded.scale)? != Some(m.total_cost()) {
        return Err(Failure::infeasible(format!(
            "recorded cost {} differs from recomputed cost {actual}",
            res.cost
        )));
    }
    println!("ok: {} pairs, cost {actual}", m.len());
    Ok(EXIT_OK)
}

fn cmd_fuzz(count: usize, seed: u64, max_n: usize, mode: Mode, dump_dir: &Path) -> Outcome {
    let guard = guard_from_env().map_err(Failure::usage)?;
    let cfg = FuzzConfig { count, seed, max_n, mode, guard };
    let report = fuzz::run(&cfg).map_err(Failure::usage)?;
    println!("{report}");
    if report.passed() {
        return Ok(EXIT_OK);
    }
    fs::create_dir_all(dump_dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dump_dir.display())))?;
    for m in &report.mismatches {
        let path = dump_dir.join(format!("mismatch-{seed}-{}.json", m.index));
        write(&path, &InstanceFile::from_instance(&m.instance).to_json())?;
        eprintln!(
            "mismatch at index {}: {} (instance in {}; reproduce with --seed {seed} --count {} --max-n {max_n} --mode {mode})",
            m.index,
            m.detail,
            path.display(),
            m.index + 1,
        );
    }
    Ok(EXIT_COUNTEREXAMPLE)
}

fn cmd_bench(sizes: &str, reps: usize, mode: Mode, seed: u64, output: Option<&Path>) -> Outcome {
    let sizes = sizes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| Failure::usage(format!("size {s:?} is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = bench::run(&sizes, reps, mode, seed).map_err(Failure::usage)?;
    let csv = bench::to_csv(&rows);
    match output {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}
