//! Minimum-cost many-to-many matching of two point sets on the real line.
//!
//! Every point carries a *demand* (the least number of distinct partners it
//! must receive from the other set) and optionally a *capacity* (the most it
//! may receive). The cost of a pair is the distance between its endpoints.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`Instance`] normalization and [`Matching`] validation,
//! - the block decomposition of the merged line ([`partition()`]),
//! - the block sweep with its three local repair steps ([`sweep`]),
//! - an exact incremental sweep ([`solve_ommd`], [`solve_ommdc`]),
//! - two independent reference solvers ([`oracle`]),
//! - structural checks on optimal matchings ([`structure`]).
//!
//! ```
//! use linematch_core::{solve_ommd, RawInstance};
//!
//! let inst = RawInstance::demands(vec![1, 5], vec![1, 1], vec![2, 3], vec![1, 1])
//!     .validate()
//!     .unwrap();
//! let sol = solve_ommd(&inst).unwrap();
//! assert_eq!(sol.cost(), 3);
//! assert_eq!(sol.matching.pairs(), &[(0, 0), (1, 1)]);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod engine;
mod feasibility;
mod instance;
mod matching;
pub mod oracle;
pub mod partition;
mod solve;
pub mod structure;
pub mod sweep;

pub use engine::{CostRow, SweepTrace};
pub use feasibility::feasibility_flow_check;
pub use instance::{Instance, InstanceError, Normalized, PointRef, RawInstance, Side};
pub use matching::{
    matching_cost, min_pair_count, validate_matching, Matching, MatchingError, Mode, UnknownMode,
    ValidationReport, Violation, ViolationKind,
};
pub use partition::{boundary_point, partition, Block, BlockPartition, PartitionError};
pub use solve::{solve, solve_ommd, solve_ommdc, solve_traced, Solution, SolveError};

/// Signed cost type. Pair costs are differences of `i64` coordinates, so sums
/// are carried in 128 bits.
pub type Cost = i128;
