use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::instance::{Instance, PointRef, Side};
use crate::Cost;

/// Which constraints a matching must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Demands only (OMMD).
    DemandOnly,
    /// Demands and capacities (OMMDC).
    DemandAndCapacity,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::DemandOnly => "ommd",
            Mode::DemandAndCapacity => "ommdc",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ommd" => Ok(Mode::DemandOnly),
            "ommdc" => Ok(Mode::DemandAndCapacity),
            _ => Err(UnknownMode),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownMode;

impl fmt::Display for UnknownMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("mode must be `ommd` or `ommdc`")
    }
}

impl core::error::Error for UnknownMode {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingError {
    IndexOutOfRange { pair: (usize, usize) },
    DuplicatePair { pair: (usize, usize) },
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::IndexOutOfRange { pair } => {
                write!(f, "pair ({}, {}) refers to a missing point", pair.0, pair.1)
            }
            MatchingError::DuplicatePair { pair } => {
                write!(f, "pair ({}, {}) occurs more than once", pair.0, pair.1)
            }
        }
    }
}

impl core::error::Error for MatchingError {}

/// A duplicate-free set of `(s_index, t_index)` pairs, kept sorted, with
/// degrees and total cost derived from an instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    s_degrees: Vec<u32>,
    t_degrees: Vec<u32>,
    total_cost: Cost,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Self {
        Matching {
            pairs: Vec::new(),
            s_degrees: vec![0; inst.y()],
            t_degrees: vec![0; inst.z()],
            total_cost: 0,
        }
    }

    pub fn from_pairs<I>(inst: &Instance, pairs: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatchingError::DuplicatePair { pair: w[0] });
        }
        let total_cost = matching_cost(inst, &pairs)?;
        let mut s_degrees = vec![0; inst.y()];
        let mut t_degrees = vec![0; inst.z()];
        for &(i, j) in &pairs {
            s_degrees[i] += 1;
            t_degrees[j] += 1;
        }
        Ok(Matching { pairs, s_degrees, t_degrees, total_cost })
    }

    /// Pairs sorted lexicographically by `(s_index, t_index)`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }

    pub fn s_degrees(&self) -> &[u32] {
        &self.s_degrees
    }

    pub fn t_degrees(&self) -> &[u32] {
        &self.t_degrees
    }

    pub fn degree(&self, p: PointRef) -> u32 {
        match p.side {
            Side::S => self.s_degrees[p.index],
            Side::T => self.t_degrees[p.index],
        }
    }

    pub fn total_cost(&self) -> Cost {
        self.total_cost
    }
}

/// Sum of `|s_i - t_j|` over `pairs`.
pub fn matching_cost(inst: &Instance, pairs: &[(usize, usize)]) -> Result<Cost, MatchingError> {
    pairs.iter().try_fold(0, |acc, &(i, j)| {
        if i >= inst.y() || j >= inst.z() {
            Err(MatchingError::IndexOutOfRange { pair: (i, j) })
        } else {
            Ok(acc + inst.distance(i, j))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DemandUnmet,
    CapacityExceeded,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::DemandUnmet => "demand-unmet",
            ViolationKind::CapacityExceeded => "capacity-exceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub point: PointRef,
    pub degree: u32,
    /// The demand or capacity that was violated.
    pub bound: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::DemandUnmet => {
                write!(f, "{}: {} has degree {} < demand {}", self.kind, self.point, self.degree, self.bound)
            }
            ViolationKind::CapacityExceeded => write!(
                f,
                "{}: {} has degree {} > capacity {}",
                self.kind, self.point, self.degree, self.bound
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every point's degree against its demand and, in capacity mode,
/// its capacity. All failing points are reported.
pub fn validate_matching(inst: &Instance, m: &Matching, mode: Mode) -> ValidationReport {
    let mut violations = Vec::new();
    let points = (0..inst.y()).map(PointRef::s).chain((0..inst.z()).map(PointRef::t));
    for p in points {
        let degree = m.degree(p);
        let demand = inst.demand(p);
        if degree < demand {
            violations.push(Violation { kind: ViolationKind::DemandUnmet, point: p, degree, bound: demand });
        }
        if mode == Mode::DemandAndCapacity && degree > inst.cap(p) {
            violations.push(Violation {
                kind: ViolationKind::CapacityExceeded,
                point: p,
                degree,
                bound: inst.cap(p),
            });
        }
    }
    ValidationReport { violations }
}

/// `max(sum(alpha), sum(beta))`: every pair raises one degree on each side,
/// so no feasible matching has fewer pairs.
pub fn min_pair_count(inst: &Instance) -> u64 {
    inst.total_demand(Side::S).max(inst.total_demand(Side::T))
}
