use alloc::string::String;
use core::fmt;

use crate::engine::{self, Bounds, SweepTrace};
use crate::feasibility::feasibility_flow_check;
use crate::instance::{Instance, PointRef, Side};
use crate::matching::{validate_matching, Matching, Mode};
use crate::Cost;

/// A feasible matching together with the mode it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub matching: Matching,
    pub mode: Mode,
}

impl Solution {
    pub fn cost(&self) -> Cost {
        self.matching.total_cost()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// A point asks for more partners than the other side holds.
    InfeasibleDemand { point: PointRef, demand: u32, available: usize },
    /// Demands cannot be met within the capacities.
    InfeasibleCapacity,
    /// The solver produced an inconsistent result; always a defect.
    Internal(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::InfeasibleDemand { point, demand, available } => {
                write!(f, "infeasible demand: {point} needs {demand} partners but only {available} exist")
            }
            SolveError::InfeasibleCapacity => {
                f.write_str("infeasible capacity: no matching meets every demand within capacity")
            }
            SolveError::Internal(msg) => write!(f, "internal solver error: {msg}"),
        }
    }
}

impl core::error::Error for SolveError {}

pub(crate) fn check_demands(inst: &Instance) -> Result<(), SolveError> {
    for side in [Side::S, Side::T] {
        let available = inst.len(side.opposite());
        for index in 0..inst.len(side) {
            let point = PointRef { side, index };
            let demand = inst.demand(point);
            if demand as usize > available {
                return Err(SolveError::InfeasibleDemand { point, demand, available });
            }
        }
    }
    Ok(())
}

/// Minimum-cost matching in which every point meets its demand.
pub fn solve_ommd(inst: &Instance) -> Result<Solution, SolveError> {
    solve(inst, Mode::DemandOnly)
}

/// Minimum-cost matching in which every point meets its demand without
/// exceeding its capacity. Points without a capacity are unbounded.
pub fn solve_ommdc(inst: &Instance) -> Result<Solution, SolveError> {
    solve(inst, Mode::DemandAndCapacity)
}

pub fn solve(inst: &Instance, mode: Mode) -> Result<Solution, SolveError> {
    check_demands(inst)?;
    if mode == Mode::DemandAndCapacity && !feasibility_flow_check(inst) {
        return Err(SolveError::InfeasibleCapacity);
    }
    let out = engine::run(inst.s_coords(), inst.t_coords(), &Bounds::of(inst, mode));
    if !out.feasible {
        return Err(SolveError::Internal("sweep ended with unmet demand".into()));
    }
    let matching =
        Matching::from_pairs(inst, out.pairs).map_err(|e| SolveError::Internal(alloc::format!("{e}")))?;
    let report = validate_matching(inst, &matching, mode);
    if let Some(v) = report.violations.first() {
        return Err(SolveError::Internal(alloc::format!("{v}")));
    }
    Ok(Solution { matching, mode })
}

/// As [`solve`], also returning the optimal prefix cost rows of every point.
///
/// Each row needs one extra solve per demand unit, so this is meant for
/// inspection of small instances.
pub fn solve_traced(inst: &Instance, mode: Mode) -> Result<(Solution, SweepTrace), SolveError> {
    let sol = solve(inst, mode)?;
    Ok((sol, engine::cost_rows(inst, mode)))
}
