//! Reference solvers used to check the main solvers.
//!
//! [`oracle_solve`] builds the textbook circulation network (source to every
//! S point with bounds `[demand, cap]`, a unit arc per cross pair costing the
//! distance, every T point to sink with bounds `[demand, cap]`, and a free
//! sink-to-source arc), removes lower bounds by the excess/deficit
//! transformation and runs successive shortest paths with Bellman-Ford.
//! [`exhaustive_solve`] enumerates every subset of `S × T`. Neither shares code
//! with the sweep solvers.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::Instance;
use crate::matching::{validate_matching, Matching, Mode};
use crate::solve::Solution;
use crate::Cost;

/// Largest `|S| + |T|` the flow oracle accepts unless overridden.
pub const DEFAULT_GUARD: usize = 64;

/// Largest `|S| · |T|` the exhaustive oracle accepts.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    Infeasible { mode: Mode },
    SizeGuardExceeded { size: usize, limit: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Infeasible { mode: Mode::DemandOnly } => {
                f.write_str("infeasible demand: no matching meets every demand")
            }
            OracleError::Infeasible { mode: Mode::DemandAndCapacity } => {
                f.write_str("infeasible capacity: no matching meets every demand within capacity")
            }
            OracleError::SizeGuardExceeded { size, limit } => {
                write!(f, "instance size {size} exceeds the oracle limit {limit}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub upper: i64,
    pub cost: Cost,
}

/// Circulation network for one instance.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<Arc>,
    y: usize,
    z: usize,
    /// Index of the first S→T arc; arc `pair_base + i * z + j` joins `S[i]` and `T[j]`.
    pair_base: usize,
}

impl FlowNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn new(inst: &Instance, mode: Mode) -> Self {
        let (y, z) = (inst.y(), inst.z());
        let s_node = |i: usize| 2 + i;
        let t_node = |j: usize| 2 + y + j;
        let cap = |c: Option<&[u32]>, k: usize, limit: usize| match (mode, c) {
            (Mode::DemandAndCapacity, Some(c)) => (c[k] as usize).min(limit) as i64,
            _ => limit as i64,
        };
        let mut arcs = Vec::with_capacity(y + z + y * z + 1);
        for i in 0..y {
            arcs.push(Arc {
                from: Self::SOURCE,
                to: s_node(i),
                lower: inst.alpha()[i] as i64,
                upper: cap(inst.cap_s(), i, z),
                cost: 0,
            });
        }
        let pair_base = arcs.len();
        for i in 0..y {
            for j in 0..z {
                arcs.push(Arc {
                    from: s_node(i),
                    to: t_node(j),
                    lower: 0,
                    upper: 1,
                    cost: inst.distance(i, j),
                });
            }
        }
        for j in 0..z {
            arcs.push(Arc {
                from: t_node(j),
                to: Self::SINK,
                lower: inst.beta()[j] as i64,
                upper: cap(inst.cap_t(), j, y),
                cost: 0,
            });
        }
        arcs.push(Arc { from: Self::SINK, to: Self::SOURCE, lower: 0, upper: UNBOUNDED, cost: 0 });
        FlowNetwork { nodes: 2 + y + z, arcs, y, z, pair_base }
    }

    /// Checks conservation at every node and the bounds of every arc.
    pub fn verify(&self, flow: &[i64]) -> Result<(), CirculationDefect> {
        let mut balance = vec![0i64; self.nodes];
        for (k, (a, &f)) in self.arcs.iter().zip(flow).enumerate() {
            if f < a.lower || f > a.upper {
                return Err(CirculationDefect::ArcOutOfBounds { arc: k, flow: f });
            }
            balance[a.from] -= f;
            balance[a.to] += f;
        }
        match balance.iter().position(|&b| b != 0) {
            Some(node) => Err(CirculationDefect::Unbalanced { node, excess: balance[node] }),
            None => Ok(()),
        }
    }

    pub fn cost(&self, flow: &[i64]) -> Cost {
        self.arcs.iter().zip(flow).map(|(a, &f)| a.cost * f as Cost).sum()
    }

    /// Saturated unit cross arcs, as `(s_index, t_index)` pairs.
    pub fn pairs(&self, flow: &[i64]) -> Vec<(usize, usize)> {
        (0..self.y * self.z)
            .filter(|&k| flow[self.pair_base + k] == 1)
            .map(|k| (k / self.z, k % self.z))
            .collect()
    }

    /// Minimum-cost feasible circulation, or `None` if none exists.
    pub fn min_cost_circulation(&self) -> Option<Vec<i64>> {
        // Residual graph over the arcs with lower bounds removed, plus a super
        // source feeding every node with positive excess and a super sink
        // draining every node with a deficit.
        let super_source = self.nodes;
        let super_sink = self.nodes + 1;
        let mut g = Residual::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let mut handles = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            excess[a.to] += a.lower;
            excess[a.from] -= a.lower;
            handles.push(g.add(a.from, a.to, a.upper - a.lower, a.cost));
        }
        let mut required = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                g.add(super_source, v, e, 0);
                required += e;
            } else if e < 0 {
                g.add(v, super_sink, -e, 0);
            }
        }
        let pushed = g.min_cost_flow(super_source, super_sink);
        if pushed < required {
            return None;
        }
        Some(self.arcs.iter().zip(&handles).map(|(a, &h)| a.lower + g.flow(h)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CirculationDefect {
    ArcOutOfBounds { arc: usize, flow: i64 },
    Unbalanced { node: usize, excess: i64 },
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<Cost>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { head: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Adds an arc and its reverse; returns the forward arc's id.
    fn add(&mut self, from: usize, to: usize, cap: i64, cost: Cost) -> usize {
        let id = self.head.len();
        self.head.extend([to, from]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn flow(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    /// Successive shortest paths with queue-based Bellman-Ford; returns the
    /// amount of flow sent.
    fn min_cost_flow(&mut self, source: usize, sink: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut dist: Vec<Option<Cost>> = vec![None; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            let mut queue = VecDeque::new();
            dist[source] = Some(0);
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                let du = dist[u].expect("queued nodes are reached");
                for &e in &self.adj[u] {
                    if self.cap[e] == 0 {
                        continue;
                    }
                    let v = self.head[e];
                    let dv = du + self.cost[e];
                    if dist[v].is_none_or(|old| dv < old) {
                        dist[v] = Some(dv);
                        via[v] = e;
                        if !queued[v] {
                            queued[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if dist[sink].is_none() {
                return total;
            }
            let mut bottleneck = i64::MAX;
            let mut v = sink;
            while v != source {
                let e = via[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.head[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = via[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.head[e ^ 1];
            }
            total += bottleneck;
        }
    }
}

/// The network and its minimum-cost circulation.
pub fn solve_circulation(
    inst: &Instance,
    mode: Mode,
    guard: usize,
) -> Result<(FlowNetwork, Vec<i64>), OracleError> {
    if inst.n() > guard {
        return Err(OracleError::SizeGuardExceeded { size: inst.n(), limit: guard });
    }
    let net = FlowNetwork::new(inst, mode);
    match net.min_cost_circulation() {
        Some(flow) => Ok((net, flow)),
        None => Err(OracleError::Infeasible { mode }),
    }
}

/// Exact minimum-cost matching through min-cost circulation.
pub fn oracle_solve(inst: &Instance, mode: Mode, guard: usize) -> Result<Solution, OracleError> {
    let (net, flow) = solve_circulation(inst, mode, guard)?;
    let matching =
        Matching::from_pairs(inst, net.pairs(&flow)).expect("unit arcs yield distinct in-range pairs");
    debug_assert_eq!(matching.total_cost(), net.cost(&flow));
    Ok(Solution { matching, mode })
}

/// Exact minimum-cost matching by enumerating every subset of `S × T`.
///
/// Among optimal matchings the one whose sorted pair list is lexicographically
/// smallest is returned.
pub fn exhaustive_solve(inst: &Instance, mode: Mode) -> Result<Solution, OracleError> {
    let (y, z) = (inst.y(), inst.z());
    let m = y * z;
    if m > EXHAUSTIVE_LIMIT {
        return Err(OracleError::SizeGuardExceeded { size: m, limit: EXHAUSTIVE_LIMIT });
    }
    let capped = mode == Mode::DemandAndCapacity;
    let lo: Vec<u32> = inst.alpha().iter().chain(inst.beta()).copied().collect();
    let hi: Vec<u32> = (0..y)
        .map(|i| inst.cap(crate::PointRef::s(i)))
        .chain((0..z).map(|j| inst.cap(crate::PointRef::t(j))))
        .map(|c| if capped { c } else { u32::MAX })
        .collect();
    let bad = |d: u32, k: usize| d < lo[k] || d > hi[k];

    let mut deg = vec![0u32; y + z];
    let mut violations = (0..y + z).filter(|&k| bad(0, k)).count();
    let mut cost: Cost = 0;
    let mut mask: u32 = 0;
    let mut best: Option<(Cost, u32)> = (violations == 0).then_some((0, 0));

    // Gray-code walk: consecutive subsets differ in exactly one pair.
    for g in 1u32..(1u32 << m) {
        let k = g.trailing_zeros() as usize;
        let (i, j) = (k / z, k % z);
        let adding = mask & (1 << k) == 0;
        mask ^= 1 << k;
        for node in [i, y + j] {
            let was = bad(deg[node], node);
            if adding {
                deg[node] += 1;
            } else {
                deg[node] -= 1;
            }
            let now = bad(deg[node], node);
            violations = violations + now as usize - was as usize;
        }
        if adding {
            cost += inst.distance(i, j);
        } else {
            cost -= inst.distance(i, j);
        }
        if violations == 0 {
            let better = match best {
                None => true,
                Some((c, b)) => cost < c || (cost == c && lex_less(mask, b, m)),
            };
            if better {
                best = Some((cost, mask));
            }
        }
    }

    let (_, mask) = best.ok_or(OracleError::Infeasible { mode })?;
    let pairs = (0..m).filter(|&k| mask & (1 << k) != 0).map(|k| (k / z, k % z));
    let matching = Matching::from_pairs(inst, pairs).expect("subsets of S × T are valid");
    debug_assert!(validate_matching(inst, &matching, mode).feasible());
    Ok(Solution { matching, mode })
}

/// Lexicographic order of the sorted pair lists encoded by two masks, where
/// bit `k` stands for the `k`-th pair in lexicographic order.
fn lex_less(a: u32, b: u32, m: usize) -> bool {
    let list = |x: u32| (0..m).filter(move |&k| x & (1 << k) != 0);
    list(a).lt(list(b))
}
