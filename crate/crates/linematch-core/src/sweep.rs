//! Block sweep.
//!
//! A left-to-right pass over the block decomposition. For every pair of
//! neighbouring blocks `(A_w, A_{w+1})`, each point `b_i` of `A_{w+1}` is first
//! offered nearby points by [`step1`]; a point still short of its demand then
//! goes through [`step2`] (taking partners from surplus points) and [`step3`]
//! (searching `A_w, A_{w-2}, ...` for the cheapest partner).
//!
//! Each point keeps a row of running costs `C(q, k)`, one entry per partner
//! acquired while it was being processed, with `C(b_i, 0)` chained from the
//! previous point. The rows drive the exchange decisions; the cost of the
//! resulting matching is always recomputed from its pairs.
//!
//! After the pass, points whose demand is still unmet are handled by the same
//! pass over the reflected line and finally by a nearest-partner fill with
//! augmenting cycles as a fallback, so
//! [`sweep`] always returns a feasible matching. It is not guaranteed to be
//! optimal; [`crate::solve`] is.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::feasibility::feasibility_flow_check;
use crate::instance::{Instance, PointRef, RawInstance, Side};
use crate::matching::{min_pair_count, Matching, Mode};
use crate::partition::{partition, BlockPartition};
use crate::solve::SolveError;
use crate::Cost;

/// How often each step ran, and what it did.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepCounters {
    pub step1: usize,
    pub step2: usize,
    pub step3: usize,
    /// Step 1 exchanges of a left partner for `b_i`.
    pub swaps: usize,
    /// Step 2 partners taken from a surplus point.
    pub steals: usize,
    /// Step 3 pairs released after matching a group representative.
    pub releases: usize,
    /// Step 3 calls that ran out of blocks.
    pub exhausted: usize,
}

impl core::ops::AddAssign for StepCounters {
    fn add_assign(&mut self, o: Self) {
        self.step1 += o.step1;
        self.step2 += o.step2;
        self.step3 += o.step3;
        self.swaps += o.swaps;
        self.steals += o.steals;
        self.releases += o.releases;
        self.exhausted += o.exhausted;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepError {
    Infeasible(SolveError),
    /// Step 3 found no partner for `point` in any block to its left.
    ExhaustedSupply {
        point: PointRef,
    },
    /// Every pass finished with `point` still below its demand.
    Stalled {
        point: PointRef,
    },
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::Infeasible(e) => e.fmt(f),
            SweepError::ExhaustedSupply { point } => {
                write!(f, "no block left of {point} can supply another partner")
            }
            SweepError::Stalled { point } => write!(f, "sweep made no progress on {point}"),
        }
    }
}

impl core::error::Error for SweepError {}

/// Remaining capacity `Cap(p) - deg(p)` per point. Points without an explicit
/// capacity may take every point of the other side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityCursor {
    s: Vec<u32>,
    t: Vec<u32>,
}

impl CapacityCursor {
    fn new(inst: &Instance, mode: Mode) -> Self {
        let cap = |p: PointRef| match mode {
            Mode::DemandOnly => inst.len(p.side.opposite()) as u32,
            Mode::DemandAndCapacity => inst.cap(p),
        };
        CapacityCursor {
            s: (0..inst.y()).map(|i| cap(PointRef::s(i))).collect(),
            t: (0..inst.z()).map(|j| cap(PointRef::t(j))).collect(),
        }
    }

    fn slot(&mut self, p: PointRef) -> &mut u32 {
        match p.side {
            Side::S => &mut self.s[p.index],
            Side::T => &mut self.t[p.index],
        }
    }

    pub fn remaining(&self, p: PointRef) -> u32 {
        match p.side {
            Side::S => self.s[p.index],
            Side::T => self.t[p.index],
        }
    }

    pub fn is_closed(&self, p: PointRef) -> bool {
        self.remaining(p) == 0
    }
}

/// Working state of one sweep. Points are addressed internally by their rank
/// on the merged line.
#[derive(Clone, Debug)]
pub struct SolverState<'a> {
    inst: &'a Instance,
    mode: Mode,
    refs: Vec<PointRef>,
    rank_s: Vec<usize>,
    rank_t: Vec<usize>,
    x: Vec<Cost>,
    demand: Vec<u32>,
    cap: Vec<u32>,
    rows: Vec<Vec<Cost>>,
    /// Partners in the order they were acquired.
    partners: Vec<Vec<usize>>,
    surplus: Vec<Vec<usize>>,
    tempset: Vec<usize>,
    pairs: BTreeSet<(usize, usize)>,
    cursor: CapacityCursor,
    pub counters: StepCounters,
}

impl<'a> SolverState<'a> {
    pub fn new(inst: &'a Instance, mode: Mode) -> Self {
        let refs = inst.merged();
        let mut rank_s = vec![0; inst.y()];
        let mut rank_t = vec![0; inst.z()];
        for (r, p) in refs.iter().enumerate() {
            match p.side {
                Side::S => rank_s[p.index] = r,
                Side::T => rank_t[p.index] = r,
            }
        }
        let n = refs.len();
        SolverState {
            inst,
            mode,
            x: refs.iter().map(|&p| inst.coord(p) as Cost).collect(),
            demand: refs.iter().map(|&p| inst.demand(p)).collect(),
            cap: refs
                .iter()
                .map(|&p| match mode {
                    Mode::DemandOnly => inst.len(p.side.opposite()) as u32,
                    Mode::DemandAndCapacity => inst.cap(p),
                })
                .collect(),
            refs,
            rank_s,
            rank_t,
            rows: vec![Vec::new(); n],
            partners: vec![Vec::new(); n],
            surplus: Vec::new(),
            tempset: Vec::new(),
            pairs: BTreeSet::new(),
            cursor: CapacityCursor::new(inst, mode),
            counters: StepCounters::default(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn degree(&self, p: PointRef) -> u32 {
        self.deg(self.rank(p)) as u32
    }

    /// Partners of `p` in acquisition order; the `k`-th entry is `M(p, k+1)`.
    pub fn partners(&self, p: PointRef) -> Vec<PointRef> {
        self.partners[self.rank(p)].iter().map(|&r| self.refs[r]).collect()
    }

    pub fn contains(&self, p: PointRef, q: PointRef) -> bool {
        self.paired(self.rank(p), self.rank(q))
    }

    /// `C(p, k)`. Entries past the end of the row repeat its last value; an
    /// empty row reads as zero.
    pub fn cost(&self, p: PointRef, k: usize) -> Cost {
        self.c(self.rank(p), k)
    }

    pub fn cost_row(&self, p: PointRef) -> &[Cost] {
        &self.rows[self.rank(p)]
    }

    /// `LL(w)`: points of block `w` registered with more partners than demanded.
    pub fn surplus_list(&self, w: usize) -> Vec<PointRef> {
        self.surplus.get(w).map_or_else(Vec::new, |l| l.iter().map(|&r| self.refs[r]).collect())
    }

    /// The candidate list built by the last [`step2`] call, in decreasing order.
    pub fn tempset(&self) -> Vec<PointRef> {
        self.tempset.iter().map(|&r| self.refs[r]).collect()
    }

    pub fn cursor(&self) -> &CapacityCursor {
        &self.cursor
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn matching(&self) -> Matching {
        Matching::from_pairs(self.inst, self.pairs.iter().copied()).expect("state pairs are valid")
    }

    /// First point, in line order, still below its demand.
    pub fn first_deficient(&self) -> Option<PointRef> {
        (0..self.refs.len()).find(|&r| self.deficient(r)).map(|r| self.refs[r])
    }

    fn rank(&self, p: PointRef) -> usize {
        match p.side {
            Side::S => self.rank_s[p.index],
            Side::T => self.rank_t[p.index],
        }
    }

    fn key(&self, a: usize, b: usize) -> (usize, usize) {
        let (p, q) = (self.refs[a], self.refs[b]);
        debug_assert_ne!(p.side, q.side);
        match p.side {
            Side::S => (p.index, q.index),
            Side::T => (q.index, p.index),
        }
    }

    fn deg(&self, r: usize) -> usize {
        self.partners[r].len()
    }

    fn deficient(&self, r: usize) -> bool {
        (self.deg(r) as u32) < self.demand[r]
    }

    fn surplus_point(&self, r: usize) -> bool {
        self.deg(r) as u32 > self.demand[r]
    }

    fn room(&self, r: usize) -> bool {
        !self.cursor.is_closed(self.refs[r])
    }

    fn paired(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&self.key(a, b))
    }

    fn link(&mut self, a: usize, b: usize) {
        let fresh = self.pairs.insert(self.key(a, b));
        debug_assert!(fresh, "pair added twice");
        for r in [a, b] {
            let slot = self.cursor.slot(self.refs[r]);
            debug_assert!(self.mode == Mode::DemandOnly || *slot > 0, "capacity exceeded");
            *slot = slot.saturating_sub(1);
        }
        self.partners[a].push(b);
        self.partners[b].push(a);
    }

    fn unlink(&mut self, a: usize, b: usize) {
        let gone = self.pairs.remove(&self.key(a, b));
        debug_assert!(gone, "pair removed twice");
        for r in [a, b] {
            *self.cursor.slot(self.refs[r]) += 1;
        }
        self.partners[a].retain(|&p| p != b);
        self.partners[b].retain(|&p| p != a);
    }

    fn c(&self, r: usize, k: usize) -> Cost {
        let row = &self.rows[r];
        row.get(k).or(row.last()).copied().unwrap_or(0)
    }

    fn set_c(&mut self, r: usize, k: usize, v: Cost) {
        let fill = self.c(r, k);
        let row = &mut self.rows[r];
        if row.len() <= k {
            row.resize(k + 1, fill);
        }
        row[k] = v;
    }

    /// Partners smaller than `r`, in acquisition order.
    fn left_partners(&self, r: usize) -> Vec<usize> {
        self.partners[r].iter().copied().filter(|&p| p < r).collect()
    }

    fn block(&self, part: &BlockPartition, w: usize) -> Vec<usize> {
        part.blocks[w].refs().map(|p| self.rank(p)).collect()
    }

    fn surplus_mut(&mut self, w: usize) -> &mut Vec<usize> {
        if self.surplus.len() <= w {
            self.surplus.resize(w + 1, Vec::new());
        }
        &mut self.surplus[w]
    }

    fn step1_impl(&mut self, part: &BlockPartition, w: usize, i: usize, capped: bool) {
        self.counters.step1 += 1;
        let bs = self.block(part, w + 1);
        let b = bs[i];
        let prev = match i {
            0 => self.rank(part.blocks[w].last()),
            _ => bs[i - 1],
        };
        let c0 = self.c(prev, self.deg(prev));
        self.set_c(b, 0, c0);

        let mut scan: Vec<usize> = if i == 0 {
            self.block(part, w).into_iter().rev().collect()
        } else {
            let mut v: Vec<usize> = self.partners[bs[i - 1]].iter().copied().filter(|&p| p < b).collect();
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        };
        if capped && i > 0 {
            let prev = bs[i - 1];
            if self.deg(prev) as u32 >= self.cap[prev] {
                if let Some(m) = self.partners[prev].iter().copied().filter(|&p| p < prev).min() {
                    let (bs_s, bs_t) = part.block_of(self.inst);
                    let pm = self.refs[m];
                    let home = match pm.side {
                        Side::S => bs_s[pm.index],
                        Side::T => bs_t[pm.index],
                    };
                    for p in self.block(part, home).into_iter().rev() {
                        if p < m && !scan.contains(&p) {
                            scan.push(p);
                        }
                    }
                }
            }
        }

        for p in scan {
            if capped && !self.room(b) {
                break;
            }
            if self.paired(p, b) {
                continue;
            }
            let d = self.deg(p) as u32;
            let gain = self.x[b] - self.x[p];
            let left = self.left_partners(p);
            let q = left.len();
            if d == self.demand[p] && q > 0 {
                let (cq, cq1) = (self.c(p, q), self.c(p, q - 1));
                let victim = left[q - 1];
                if cq > cq1 + gain && self.surplus_point(victim) {
                    self.unlink(p, victim);
                    self.link(p, b);
                    let k = self.deg(b);
                    let v = self.c(b, k - 1) + gain - cq + cq1;
                    self.set_c(b, k, v);
                    self.counters.swaps += 1;
                }
            } else if d < self.demand[p] {
                self.link(p, b);
                let k = self.deg(b);
                let v = self.c(b, k - 1) + gain;
                self.set_c(b, k, v);
            }
        }
    }

    fn step2_impl(&mut self, part: &BlockPartition, w: usize, b: usize) {
        self.counters.step2 += 1;
        let capped = self.mode == Mode::DemandAndCapacity;
        while self.deficient(b) {
            let Some(&bj) = self.surplus_mut(w + 1).last() else {
                break;
            };
            let k = self.deg(b) + 1;
            let taken = self.partners[bj].iter().copied().filter(|&a| !self.paired(a, b)).min();
            let Some(au) = taken else {
                self.surplus_mut(w + 1).pop();
                continue;
            };
            self.unlink(au, bj);
            self.link(au, b);
            self.counters.steals += 1;
            let v = self.c(b, k - 1) + self.x[b] - self.x[bj];
            self.set_c(b, k, v);
            if !self.surplus_point(bj) {
                self.surplus_mut(w + 1).pop();
            }
        }

        let bs = self.block(part, w + 1);
        let i = bs.iter().position(|&r| r == b).unwrap_or(bs.len());
        let mut best: Option<usize> = None;
        for &bj in &bs[..i] {
            if best.is_none_or(|o| self.deg(bj) >= self.deg(o)) {
                best = Some(bj);
            }
        }
        self.tempset = match best {
            Some(bj) => {
                let mut v: Vec<usize> = self.partners[bj]
                    .iter()
                    .take(self.demand[bj] as usize)
                    .copied()
                    .filter(|&a| self.surplus_point(a) && (!capped || self.room(a)))
                    .collect();
                v.sort_unstable_by(|x, y| y.cmp(x));
                v
            }
            None => Vec::new(),
        };
        for a in self.tempset.clone() {
            if !self.deficient(b) {
                break;
            }
            if !self.paired(a, b) {
                self.link(a, b);
                let k = self.deg(b);
                let v = self.c(b, k - 1) + self.x[b] - self.x[a];
                self.set_c(b, k, v);
            }
        }
    }

    fn step3_impl(
        &mut self,
        part: &BlockPartition,
        w: usize,
        b: usize,
        capped: bool,
    ) -> Result<(), SweepError> {
        self.counters.step3 += 1;
        let mut w2 = Some(w);
        while self.deficient(b) {
            let Some(cur) = w2 else {
                self.counters.exhausted += 1;
                return Err(SweepError::ExhaustedSupply { point: self.refs[b] });
            };
            let free: Vec<usize> =
                self.block(part, cur).into_iter().filter(|&p| !self.paired(p, b)).collect();
            let k = self.deg(b) + 1;
            let base = self.c(b, k - 1) + self.x[b];

            // (score, coordinate, point, released partner)
            let mut best: Option<(Cost, Cost, usize, Option<usize>)> = None;
            let mut offer = |cand: (Cost, Cost, usize, Option<usize>)| {
                if best.is_none_or(|(s, x, _, _)| cand.0 < s || (cand.0 == s && cand.1 > x)) {
                    best = Some(cand);
                }
            };
            let mut groups = BTreeSet::new();
            for &p in free.iter().rev() {
                let left = self.left_partners(p);
                let u = left.len();
                if !groups.insert(u) {
                    continue;
                }
                let victim = left.last().copied().filter(|&v| self.surplus_point(v));
                let delta = if u > 0 { self.c(p, u - 1) - self.c(p, u) } else { 0 };
                let (term, release) = if capped && !self.room(p) {
                    match victim {
                        Some(v) => (delta, Some(v)),
                        None => continue,
                    }
                } else if delta < 0 {
                    (delta, victim)
                } else {
                    (0, None)
                };
                offer((base - self.x[p] + term, self.x[p], p, release));
            }
            if capped {
                if let Some(&p) = free.iter().rev().find(|&&p| self.room(p)) {
                    offer((base - self.x[p], self.x[p], p, None));
                }
            }

            let Some((score, _, a, release)) = best else {
                w2 = cur.checked_sub(2);
                continue;
            };
            if let Some(v) = release {
                self.unlink(v, a);
                self.counters.releases += 1;
            }
            self.link(a, b);
            self.set_c(b, k, score);
        }
        Ok(())
    }

    /// One left-to-right pass over all block pairs.
    fn forward(&mut self, part: &BlockPartition) {
        let capped = self.mode == Mode::DemandAndCapacity;
        let target = min_pair_count(self.inst);
        let mut supply = vec![0usize; part.len()];
        for w in 0..part.len() {
            supply[w] = part.blocks[w].points.len() + w.checked_sub(2).map_or(0, |v| supply[v]);
        }
        for (w, &avail) in supply.iter().enumerate().take(part.len().saturating_sub(1)) {
            if self.pairs.len() as u64 >= target && self.first_deficient().is_none() {
                break;
            }
            let bs = self.block(part, w + 1);
            for i in 0..bs.len() {
                self.step1_impl(part, w, i, capped);
            }
            for &b in &bs {
                if self.surplus_point(b) {
                    self.surplus_mut(w + 1).push(b);
                } else if self.deficient(b) {
                    if avail >= self.demand[b] as usize {
                        self.step2_impl(part, w, b);
                    }
                    if self.deficient(b) {
                        // Left unmet here; the later passes pick it up.
                        let _ = self.step3_impl(part, w, b, capped);
                    }
                }
            }
        }
    }

    /// Adds nearest admissible partners to every point still below demand.
    fn fill(&mut self) -> usize {
        let mut added = 0;
        for r in 0..self.refs.len() {
            while self.deficient(r) {
                let side = self.refs[r].side;
                let pick = (0..self.refs.len())
                    .filter(|&o| self.refs[o].side != side && !self.paired(r, o) && self.room(o))
                    .min_by_key(|&o| ((self.x[o] - self.x[r]).abs(), o));
                match pick {
                    Some(o) => self.link(r, o),
                    None if self.augment(r) => {}
                    None => break,
                }
                added += 1;
            }
        }
        added
    }

    /// Raises the degree of `r` by one along a residual cycle of the degree
    /// flow network, keeping every other point within its bounds.
    fn augment(&mut self, r: usize) -> bool {
        let n = self.refs.len();
        let (src, snk) = (n, n + 1);
        let (from, to) = match self.refs[r].side {
            Side::S => (r, src),
            Side::T => (snk, r),
        };
        let mut parent = vec![usize::MAX; n + 2];
        parent[from] = from;
        let mut queue = alloc::collections::VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            let next: Vec<usize> = if u == src {
                (0..n)
                    .filter(|&v| self.refs[v].side == Side::S && self.room(v))
                    .chain((!self.pairs.is_empty()).then_some(snk))
                    .collect()
            } else if u == snk {
                (0..n)
                    .filter(|&v| self.refs[v].side == Side::T && self.surplus_point(v))
                    .chain([src])
                    .collect()
            } else if self.refs[u].side == Side::S {
                (0..n)
                    .filter(|&v| self.refs[v].side == Side::T && !self.paired(u, v))
                    .chain(self.surplus_point(u).then_some(src))
                    .collect()
            } else {
                self.partners[u].iter().copied().chain(self.room(u).then_some(snk)).collect()
            };
            for v in next {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to] == usize::MAX {
            return false;
        }
        let mut path = vec![to];
        while *path.last().unwrap() != from {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse();
        let steps: Vec<(usize, usize)> =
            path.windows(2).map(|e| (e[0], e[1])).filter(|&(u, v)| u < n && v < n).collect();
        for &(u, v) in &steps {
            if self.refs[u].side == Side::T {
                self.unlink(v, u);
            }
        }
        for &(u, v) in &steps {
            if self.refs[u].side == Side::S {
                self.link(u, v);
            }
        }
        true
    }
}

/// Step 1 for the `i`-th point (from 0) of block `w + 1`.
pub fn step1(state: &mut SolverState<'_>, part: &BlockPartition, w: usize, i: usize) {
    state.step1_impl(part, w, i, false);
}

/// Step 1 honouring capacities: `b_i` stops taking partners when full, and
/// when `b_{i-1}` is full the scan continues below its smallest partner.
pub fn step1_capacitated(state: &mut SolverState<'_>, part: &BlockPartition, w: usize, i: usize) {
    state.step1_impl(part, w, i, true);
}

/// Step 2 for point `b` of block `w + 1`.
pub fn step2(state: &mut SolverState<'_>, part: &BlockPartition, w: usize, b: PointRef) {
    let r = state.rank(b);
    state.step2_impl(part, w, r);
}

/// Step 3 for point `b` of block `w + 1`.
pub fn step3(
    state: &mut SolverState<'_>,
    part: &BlockPartition,
    w: usize,
    b: PointRef,
) -> Result<(), SweepError> {
    let r = state.rank(b);
    state.step3_impl(part, w, r, false)
}

/// Step 3 honouring capacities: a full point is a candidate only if it can
/// release a smaller partner, and the largest point with spare capacity is
/// considered as well.
pub fn step3_capacitated(
    state: &mut SolverState<'_>,
    part: &BlockPartition,
    w: usize,
    b: PointRef,
) -> Result<(), SweepError> {
    let r = state.rank(b);
    state.step3_impl(part, w, r, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    pub matching: Matching,
    pub counters: StepCounters,
    /// Whether the reflected pass ran.
    pub mirrored: bool,
    /// Pairs added by the nearest-partner fill.
    pub filled: usize,
}

impl SweepOutcome {
    pub fn cost(&self) -> Cost {
        self.matching.total_cost()
    }
}

pub fn run_main_loop(inst: &Instance) -> Result<SweepOutcome, SweepError> {
    sweep(inst, Mode::DemandOnly)
}

pub fn run_main_loop_capacitated(inst: &Instance) -> Result<SweepOutcome, SweepError> {
    sweep(inst, Mode::DemandAndCapacity)
}

/// The full sweep: forward pass, reflected pass if needed, then the fill.
pub fn sweep(inst: &Instance, mode: Mode) -> Result<SweepOutcome, SweepError> {
    crate::solve::check_demands(inst).map_err(SweepError::Infeasible)?;
    if mode == Mode::DemandAndCapacity && !feasibility_flow_check(inst) {
        return Err(SweepError::Infeasible(SolveError::InfeasibleCapacity));
    }
    let mut state = SolverState::new(inst, mode);
    let mut mirrored = false;
    if let Ok(part) = partition(inst) {
        state.forward(&part);
        if state.first_deficient().is_some() {
            mirrored = true;
            reflect_pass(&mut state);
        }
    }
    let filled = state.fill();
    if let Some(point) = state.first_deficient() {
        return Err(SweepError::Stalled { point });
    }
    Ok(SweepOutcome { matching: state.matching(), counters: state.counters, mirrored, filled })
}

/// The instance under `x -> !x`, which reverses the line and keeps distances.
fn reflect(inst: &Instance) -> Instance {
    let flip = |v: &[i64]| v.iter().rev().map(|&x| !x).collect::<Vec<_>>();
    let wide = |v: &[u32]| v.iter().rev().map(|&d| d as i64).collect::<Vec<_>>();
    let mut raw = RawInstance::demands(
        flip(inst.s_coords()),
        wide(inst.alpha()),
        flip(inst.t_coords()),
        wide(inst.beta()),
    );
    if let (Some(cs), Some(ct)) = (inst.cap_s(), inst.cap_t()) {
        raw = raw.with_caps(wide(cs), wide(ct));
    }
    raw.normalize_structure().expect("reflection of a valid instance is valid").instance
}

fn reflect_pass(state: &mut SolverState<'_>) {
    let (y, z) = (state.inst.y(), state.inst.z());
    let mirror = reflect(state.inst);
    let mut m = SolverState::new(&mirror, state.mode);
    let mut seeded: Vec<(usize, usize)> = state.pairs.iter().map(|&(i, j)| (y - 1 - i, z - 1 - j)).collect();
    seeded.sort_unstable_by_key(|&(i, j)| m.rank_s[i].max(m.rank_t[j]));
    for (i, j) in seeded {
        let (a, b) = (m.rank_s[i], m.rank_t[j]);
        m.link(a, b);
    }
    if let Ok(part) = partition(&mirror) {
        m.forward(&part);
    }
    state.counters += m.counters;
    let back: Vec<(usize, usize)> = m.pairs.iter().map(|&(i, j)| (y - 1 - i, z - 1 - j)).collect();
    for (i, j) in state.pairs.clone() {
        let (a, b) = (state.rank_s[i], state.rank_t[j]);
        state.unlink(a, b);
    }
    for (i, j) in back {
        let (a, b) = (state.rank_s[i], state.rank_t[j]);
        state.link(a, b);
    }
}
