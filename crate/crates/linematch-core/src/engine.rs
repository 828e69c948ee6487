//! Exact incremental sweep.
//!
//! Points are inserted in ascending coordinate order into a min-cost
//! circulation: a source σ feeds every S point, every T point drains into a
//! sink τ, τ returns to σ, and each unmatched cross pair is a unit arc costing
//! its length. Every unit of demand is rewarded with a bonus `M` larger than
//! any matching cost, so a minimum-cost circulation first maximizes satisfied
//! demand and then minimizes distance.
//!
//! Before a point `q` is inserted the circulation is optimal, so any negative
//! residual cycle afterwards runs through `q`. Such cycles are cancelled one at
//! a time by a Dijkstra search over reduced costs: forward from an S root, and
//! backward (towards the root) from a T root, so that the closing arcs of the
//! cycle are always the root's few matched pairs plus one source or sink arc.
//! Dense arc families are never materialized: a settled point reaches every
//! unmatched point of the other side, and σ and τ reach every point they feed,
//! through segment trees that offer `tag + weight(leaf)` over a range of leaves.
//!
//! Potentials are stored relative to a global offset, so a search only
//! touches the nodes it settles. Tree tags and search labels are invalidated
//! by bumping an epoch counter.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::instance::{Instance, PointRef};
use crate::matching::Mode;
use crate::Cost;

const INF: Cost = Cost::MAX / 8;
const NONE: u32 = u32::MAX;
const SIGMA: u32 = 0;
const TAU: u32 = 1;

// Forward trees. T leaves: `x_t - π(t)`, `-x_t - π(t)`, `c(τ, t) - π(t)`.
// S leaves: `c(σ, s) - π(s)`.
const RIGHT: usize = 0;
const LEFT: usize = 1;
const FAN_T: usize = 2;
const FAN_S: usize = 3;
// Backward trees. S leaves: `x_s + π(s)`, `-x_s + π(s)`, `c(s, σ) + π(s)`.
// T leaves: `c(t, τ) + π(t)`.
const BACK_RIGHT: usize = 4;
const BACK_LEFT: usize = 5;
const SINK_S: usize = 6;
const SINK_T: usize = 7;
const S_LEAVES: [bool; 8] = [false, false, false, true, true, true, true, false];

/// Degree bounds per point.
#[derive(Clone, Debug)]
pub(crate) struct Bounds {
    pub lo_s: Vec<u32>,
    pub hi_s: Vec<u32>,
    pub lo_t: Vec<u32>,
    pub hi_t: Vec<u32>,
}

impl Bounds {
    pub fn of(inst: &Instance, mode: Mode) -> Self {
        let hi = |p: PointRef, opposite: usize| match mode {
            Mode::DemandOnly => opposite as u32,
            Mode::DemandAndCapacity => inst.cap(p).min(opposite as u32),
        };
        Bounds {
            lo_s: inst.alpha().to_vec(),
            hi_s: (0..inst.y()).map(|i| hi(PointRef::s(i), inst.z())).collect(),
            lo_t: inst.beta().to_vec(),
            hi_t: (0..inst.z()).map(|j| hi(PointRef::t(j), inst.y())).collect(),
        }
    }
}

pub(crate) struct Outcome {
    pub pairs: Vec<(usize, usize)>,
    pub feasible: bool,
}

/// Runs the sweep over the given sorted coordinates.
pub(crate) fn run(xs: &[i64], xt: &[i64], bounds: &Bounds) -> Outcome {
    let mut e = Engine::new(xs, xt, bounds);
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < xt.len() {
        let take_s = j == xt.len() || (i < xs.len() && xs[i] < xt[j]);
        let root = if take_s {
            i += 1;
            e.ys = i;
            e.s_node(i - 1)
        } else {
            j += 1;
            e.zt = j;
            e.t_node(j - 1)
        };
        while e.cancel_through(root) {}
        e.refresh_leaves(root);
    }
    let feasible = (0..xs.len()).all(|i| e.ps[i].len() as u32 >= bounds.lo_s[i])
        && (0..xt.len()).all(|j| e.pt[j].len() as u32 >= bounds.lo_t[j]);
    let pairs =
        e.ps.iter().enumerate().flat_map(|(i, ts)| ts.iter().map(move |&t| (i, t as usize))).collect();
    Outcome { pairs, feasible }
}

struct Engine<'a> {
    xs: &'a [i64],
    xt: &'a [i64],
    b: &'a Bounds,
    big: Cost,
    /// Sorted partners of each S point and each T point.
    ps: Vec<Vec<u32>>,
    pt: Vec<Vec<u32>>,
    pairs: usize,
    /// Node potentials, minus a common offset that is never materialized.
    pi: Vec<Cost>,
    ys: usize,
    zt: usize,
    epoch: u32,
    stamp: Vec<u32>,
    dist: Vec<Cost>,
    done: Vec<bool>,
    /// Previous node on the path from the root (forward) or next node on the
    /// path to the root (backward).
    parent: Vec<u32>,
    settled: Vec<u32>,
    heap: BinaryHeap<Reverse<(Cost, u32)>>,
    trees: [Tree; 8],
}

impl<'a> Engine<'a> {
    fn new(xs: &'a [i64], xt: &'a [i64], b: &'a Bounds) -> Self {
        let (y, z) = (xs.len(), xt.len());
        let edge = |v: Option<&i64>| v.copied().unwrap_or(0) as Cost;
        let span = edge(xs.last()).max(edge(xt.last())) - edge(xs.first()).min(edge(xt.first()));
        let nodes = 2 + y + z;
        Engine {
            xs,
            xt,
            b,
            big: (y as Cost * z as Cost + 1) * (span + 1) + 1,
            ps: vec![Vec::new(); y],
            pt: vec![Vec::new(); z],
            pairs: 0,
            pi: vec![0; nodes],
            ys: 0,
            zt: 0,
            epoch: 0,
            stamp: vec![0; nodes],
            dist: vec![INF; nodes],
            done: vec![false; nodes],
            parent: vec![NONE; nodes],
            settled: Vec::new(),
            heap: BinaryHeap::new(),
            trees: core::array::from_fn(|k| Tree::new(if S_LEAVES[k] { y } else { z })),
        }
    }

    fn s_node(&self, i: usize) -> u32 {
        2 + i as u32
    }

    fn t_node(&self, j: usize) -> u32 {
        (2 + self.xs.len() + j) as u32
    }

    /// `Some(i)` for S nodes.
    fn as_s(&self, v: u32) -> Option<usize> {
        let k = (v as usize).checked_sub(2)?;
        (k < self.xs.len()).then_some(k)
    }

    /// `Some(j)` for T nodes.
    fn as_t(&self, v: u32) -> Option<usize> {
        (v as usize).checked_sub(2 + self.xs.len())
    }

    fn len(&self, i: usize, j: usize) -> Cost {
        (self.xs[i] as Cost - self.xt[j] as Cost).abs()
    }

    fn matched(&self, i: usize, j: usize) -> bool {
        self.ps[i].binary_search(&(j as u32)).is_ok()
    }

    // Residual arc costs on the convex source and sink arcs.

    fn feed(&self, deg: usize, lo: u32, hi: u32) -> Option<Cost> {
        let deg = deg as u32;
        (deg < hi).then(|| if deg < lo { -self.big } else { 0 })
    }

    fn unfeed(&self, deg: usize, lo: u32) -> Option<Cost> {
        let deg = deg as u32;
        (deg > 0).then_some(if deg <= lo { self.big } else { 0 })
    }

    fn sigma_to_s(&self, i: usize) -> Option<Cost> {
        self.feed(self.ps[i].len(), self.b.lo_s[i], self.b.hi_s[i])
    }

    fn s_to_sigma(&self, i: usize) -> Option<Cost> {
        self.unfeed(self.ps[i].len(), self.b.lo_s[i])
    }

    fn t_to_tau(&self, j: usize) -> Option<Cost> {
        self.feed(self.pt[j].len(), self.b.lo_t[j], self.b.hi_t[j])
    }

    fn tau_to_t(&self, j: usize) -> Option<Cost> {
        self.unfeed(self.pt[j].len(), self.b.lo_t[j])
    }

    fn toggle(&mut self, from: u32, to: u32) {
        match (self.as_s(from), self.as_t(to), self.as_t(from), self.as_s(to)) {
            (Some(i), Some(j), _, _) => {
                let k = self.ps[i].binary_search(&(j as u32)).unwrap_err();
                self.ps[i].insert(k, j as u32);
                let k = self.pt[j].binary_search(&(i as u32)).unwrap_err();
                self.pt[j].insert(k, i as u32);
                self.pairs += 1;
            }
            (_, _, Some(j), Some(i)) => {
                let k = self.ps[i].binary_search(&(j as u32)).unwrap();
                self.ps[i].remove(k);
                let k = self.pt[j].binary_search(&(i as u32)).unwrap();
                self.pt[j].remove(k);
                self.pairs -= 1;
            }
            _ => {}
        }
    }

    /// Writes the current potential and degree of a point into its tree leaves.
    fn refresh_leaves(&mut self, v: u32) {
        let pi = self.pi[v as usize];
        if let Some(i) = self.as_s(v) {
            let x = self.xs[i] as Cost;
            let fan = self.sigma_to_s(i).map_or(INF, |c| c - pi);
            let sink = self.s_to_sigma(i).map_or(INF, |c| c + pi);
            self.trees[FAN_S].set(i, fan);
            self.trees[BACK_RIGHT].set(i, x + pi);
            self.trees[BACK_LEFT].set(i, -x + pi);
            self.trees[SINK_S].set(i, sink);
        } else if let Some(j) = self.as_t(v) {
            let x = self.xt[j] as Cost;
            let fan = self.tau_to_t(j).map_or(INF, |c| c - pi);
            let sink = self.t_to_tau(j).map_or(INF, |c| c + pi);
            self.trees[RIGHT].set(j, x - pi);
            self.trees[LEFT].set(j, -x - pi);
            self.trees[FAN_T].set(j, fan);
            self.trees[SINK_T].set(j, sink);
        }
    }

    /// Withdraws a settled point from the trees of the current direction.
    fn hide_leaves(&mut self, v: u32, forward: bool) {
        let (leaf, family): (usize, &[usize]) = match (self.as_s(v), self.as_t(v), forward) {
            (Some(i), _, true) => (i, &[FAN_S]),
            (Some(i), _, false) => (i, &[BACK_RIGHT, BACK_LEFT, SINK_S]),
            (_, Some(j), true) => (j, &[RIGHT, LEFT, FAN_T]),
            (_, Some(j), false) => (j, &[SINK_T]),
            _ => return,
        };
        for &k in family {
            self.trees[k].set(leaf, INF);
        }
    }

    /// Forward root potential of an S root: `min (c(u, root) + π(u))` over
    /// its in-arcs.
    fn s_root_entry(&self, q: usize) -> Option<Cost> {
        let from_sigma = self.sigma_to_s(q).map(|c| c + self.pi[SIGMA as usize]);
        let from_t =
            self.ps[q].iter().map(|&t| -self.len(q, t as usize) + self.pi[self.t_node(t as usize) as usize]);
        from_sigma.into_iter().chain(from_t).min()
    }

    /// Backward root potential of a T root: `max (π(v) - c(root, v))` over
    /// its out-arcs.
    fn t_root_exit(&self, q: usize) -> Option<Cost> {
        let to_tau = self.t_to_tau(q).map(|c| self.pi[TAU as usize] - c);
        let to_s =
            self.pt[q].iter().map(|&s| self.pi[self.s_node(s as usize) as usize] + self.len(s as usize, q));
        to_tau.into_iter().chain(to_s).max()
    }

    /// Potential for a root that cannot lie on any cycle, keeping the arcs
    /// it does have non-negative.
    fn isolated_potential(&self, root: u32) -> Cost {
        if let Some(q) = self.as_s(root) {
            let to_t = (0..self.zt)
                .filter(|&t| !self.matched(q, t))
                .map(|t| self.pi[self.t_node(t) as usize] - self.len(q, t));
            let to_sigma = self.s_to_sigma(q).map(|c| self.pi[SIGMA as usize] - c);
            to_t.chain(to_sigma).max()
        } else {
            let q = self.as_t(root).expect("root is a point");
            let from_s = (0..self.ys)
                .filter(|&s| !self.matched(s, q))
                .map(|s| self.len(s, q) + self.pi[self.s_node(s) as usize]);
            let from_tau = self.tau_to_t(q).map(|c| c + self.pi[TAU as usize]);
            from_s.chain(from_tau).min()
        }
        .unwrap_or(self.pi[root as usize])
    }

    fn label(&self, v: u32) -> Cost {
        if self.stamp[v as usize] == self.epoch {
            self.dist[v as usize]
        } else {
            INF
        }
    }

    fn is_done(&self, v: u32) -> bool {
        self.stamp[v as usize] == self.epoch && self.done[v as usize]
    }

    fn relax(&mut self, v: u32, d: Cost, from: u32) {
        let k = v as usize;
        if self.stamp[k] != self.epoch {
            self.stamp[k] = self.epoch;
            self.dist[k] = INF;
            self.done[k] = false;
        }
        if !self.done[k] && d < self.dist[k] {
            self.dist[k] = d;
            self.parent[k] = from;
            self.heap.push(Reverse((d, v)));
        }
    }

    fn settle(&mut self, v: u32, d: Cost, from: u32) {
        let k = v as usize;
        self.stamp[k] = self.epoch;
        self.done[k] = true;
        self.dist[k] = d;
        self.parent[k] = from;
        self.settled.push(v);
    }

    /// Offers `base + |x_p - x_o|` (plus the leaf's potential term) to every
    /// point `o` of the other side not matched to point `p`. Forward from an
    /// S point, or backward from a T point.
    fn relax_ranges(&mut self, forward: bool, p: usize, base: Cost, src: u32) {
        let (x, others, n, left, right) = if forward {
            (self.xs[p], self.xt, self.zt, LEFT, RIGHT)
        } else {
            (self.xt[p], self.xs, self.ys, BACK_LEFT, BACK_RIGHT)
        };
        let split = others[..n].partition_point(|&o| o < x);
        let x = x as Cost;
        let mut from = 0;
        let mut k = 0;
        loop {
            let partners = if forward { &self.ps[p] } else { &self.pt[p] };
            let done = k == partners.len();
            let stop = partners.get(k).map_or(n, |&o| o as usize).min(n);
            if from < stop {
                if from < split {
                    self.trees[left].chmin(from, stop.min(split), base + x, src);
                }
                if stop > split {
                    self.trees[right].chmin(from.max(split), stop, base - x, src);
                }
            }
            if done {
                break;
            }
            from = stop + 1;
            k += 1;
        }
    }

    /// Smallest tentative label among the heap and the tree offers of the
    /// current direction, as `(label, node, predecessor)`.
    fn next_pick(&mut self, forward: bool) -> Option<(Cost, u32, u32)> {
        while let Some(&Reverse((d, v))) = self.heap.peek() {
            if self.is_done(v) || d != self.label(v) {
                self.heap.pop();
            } else {
                break;
            }
        }
        let mut pick = self.heap.peek().map(|&Reverse((d, v))| (d, v, self.parent[v as usize]));
        let family =
            if forward { [RIGHT, LEFT, FAN_T, FAN_S] } else { [BACK_RIGHT, BACK_LEFT, SINK_S, SINK_T] };
        for k in family {
            if let Some((d, leaf, src)) = self.trees[k].best() {
                if pick.is_none_or(|(b, _, _)| d < b) {
                    let v = if S_LEAVES[k] { self.s_node(leaf) } else { self.t_node(leaf) };
                    pick = Some((d, v, src));
                }
            }
        }
        pick
    }

    /// Relaxes the out-arcs of a node settled in a forward search;
    /// `base = d(u) + π(u)`.
    fn expand_forward(&mut self, u: u32, base: Cost) {
        let pi = |e: &Self, v: u32| e.pi[v as usize];
        if u == SIGMA {
            self.trees[FAN_S].chmin(0, self.ys, base, u);
            if self.pairs > 0 {
                self.relax(TAU, base - pi(self, TAU), u);
            }
        } else if u == TAU {
            self.trees[FAN_T].chmin(0, self.zt, base, u);
            self.relax(SIGMA, base - pi(self, SIGMA), u);
        } else if let Some(i) = self.as_s(u) {
            if let Some(c) = self.s_to_sigma(i) {
                self.relax(SIGMA, base + c - pi(self, SIGMA), u);
            }
            self.relax_ranges(true, i, base, u);
        } else if let Some(j) = self.as_t(u) {
            if let Some(c) = self.t_to_tau(j) {
                self.relax(TAU, base + c - pi(self, TAU), u);
            }
            for k in 0..self.pt[j].len() {
                let s = self.pt[j][k] as usize;
                let v = self.s_node(s);
                self.relax(v, base - self.len(s, j) - pi(self, v), u);
            }
        }
    }

    /// Relaxes the in-arcs of a node settled in a backward search;
    /// `base = e(u) - π(u)`.
    fn expand_backward(&mut self, u: u32, base: Cost) {
        let pi = |e: &Self, v: u32| e.pi[v as usize];
        if u == SIGMA {
            self.trees[SINK_S].chmin(0, self.ys, base, u);
            self.relax(TAU, base + pi(self, TAU), u);
        } else if u == TAU {
            self.trees[SINK_T].chmin(0, self.zt, base, u);
            if self.pairs > 0 {
                self.relax(SIGMA, base + pi(self, SIGMA), u);
            }
        } else if let Some(i) = self.as_s(u) {
            if let Some(c) = self.sigma_to_s(i) {
                self.relax(SIGMA, base + c + pi(self, SIGMA), u);
            }
            for k in 0..self.ps[i].len() {
                let t = self.ps[i][k] as usize;
                let v = self.t_node(t);
                self.relax(v, base - self.len(i, t) + pi(self, v), u);
            }
        } else if let Some(j) = self.as_t(u) {
            if let Some(c) = self.tau_to_t(j) {
                self.relax(TAU, base + c + pi(self, TAU), u);
            }
            self.relax_ranges(false, j, base, u);
        }
    }

    /// Looks for a negative cycle through `root` and cancels the cheapest one.
    ///
    /// An S root is searched forward with `π(root)` set to its cheapest
    /// in-arc, and the cycle closes on an arc back into the root. A T root is
    /// searched backward with `π(root)` set from its out-arcs, and the cycle
    /// closes on an arc out of the root.
    fn cancel_through(&mut self, root: u32) -> bool {
        let forward = self.as_s(root).is_some();
        let (q, anchor) = match self.as_s(root) {
            Some(q) => (q, self.s_root_entry(q)),
            None => {
                let q = self.as_t(root).expect("root is a point");
                (q, self.t_root_exit(q))
            }
        };
        let Some(anchor) = anchor else {
            self.pi[root as usize] = self.isolated_potential(root);
            return false;
        };

        self.epoch += 1;
        for t in &mut self.trees {
            t.epoch = self.epoch;
        }
        self.heap.clear();
        self.settled.clear();
        let rk = root as usize;
        self.stamp[rk] = self.epoch;
        self.done[rk] = true;
        self.dist[rk] = 0;
        let mut pending;
        if forward {
            pending = self.ps[q].len() + self.sigma_to_s(q).is_some() as usize;
            self.expand_forward(root, anchor);
        } else {
            pending = self.pt[q].len() + self.t_to_tau(q).is_some() as usize;
            self.expand_backward(root, -anchor);
        }

        let mut best = INF;
        let mut closer = NONE;
        let mut max_settled: Cost = 0;
        let stop = loop {
            let Some((d, u, from)) = self.next_pick(forward) else {
                break max_settled;
            };
            // A cycle closing at a node with a non-negative label is never
            // negative, since the closing arc has a non-negative reduced cost.
            if pending == 0 || d >= best.min(0) {
                break d;
            }
            self.settle(u, d, from);
            max_settled = max_settled.max(d);
            self.hide_leaves(u, forward);
            let pu = self.pi[u as usize];

            let close = if forward {
                match self.as_t(u) {
                    Some(j) if self.matched(q, j) => Some(-self.len(q, j) + pu - anchor),
                    _ if u == SIGMA => self.sigma_to_s(q).map(|c| c + pu - anchor),
                    _ => None,
                }
            } else {
                match self.as_s(u) {
                    Some(i) if self.matched(i, q) => Some(-self.len(i, q) + anchor - pu),
                    _ if u == TAU => self.t_to_tau(q).map(|c| c + anchor - pu),
                    _ => None,
                }
            };
            if let Some(c) = close {
                pending -= 1;
                if d + c < best {
                    best = d + c;
                    closer = u;
                }
            }

            if forward {
                self.expand_forward(u, d + pu);
            } else {
                self.expand_backward(u, d - pu);
            }
        };

        // Every unsettled node moves by `stop`; folding that into the common
        // offset leaves only settled nodes to adjust.
        for k in 0..self.settled.len() {
            let v = self.settled[k] as usize;
            let d = self.dist[v].min(stop);
            self.pi[v] += if forward { d - stop } else { stop - d };
        }
        self.pi[rk] = if forward { anchor - stop } else { anchor + stop };

        if best < 0 {
            if forward {
                self.toggle(closer, root);
            } else {
                self.toggle(root, closer);
            }
            let mut v = closer;
            while v != root {
                let next = self.parent[v as usize];
                if forward {
                    self.toggle(next, v);
                } else {
                    self.toggle(v, next);
                }
                v = next;
            }
        }
        for k in 0..self.settled.len() {
            let v = self.settled[k];
            self.refresh_leaves(v);
        }
        best < 0
    }
}

#[derive(Clone, Copy)]
struct Slot {
    minw: Cost,
    tag: Cost,
    best: Cost,
    arg: u32,
    tsrc: u32,
    bleaf: u32,
    bsrc: u32,
    ver: u32,
}

/// Segment tree supporting "offer `c + w(leaf)` to every leaf in a range"
/// and leaf weight updates, reporting the smallest offer on a leaf of finite
/// weight together with the offer's source. Offers last for one epoch.
struct Tree {
    size: usize,
    epoch: u32,
    slots: Vec<Slot>,
}

impl Tree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        let blank =
            Slot { minw: INF, tag: INF, best: INF, arg: NONE, tsrc: NONE, bleaf: NONE, bsrc: NONE, ver: 0 };
        let mut slots = vec![blank; 2 * size];
        for k in 0..size {
            slots[size + k].arg = k as u32;
        }
        for node in (1..size).rev() {
            slots[node].arg = slots[2 * node].arg;
        }
        Tree { size, epoch: 0, slots }
    }

    fn pull(&mut self, node: usize) {
        let epoch = self.epoch;
        let mut s = self.slots[node];
        if s.ver != epoch {
            s.tag = INF;
            s.tsrc = NONE;
            s.ver = epoch;
        }
        s.best = INF;
        if node < self.size {
            let (l, r) = (self.slots[2 * node], self.slots[2 * node + 1]);
            let c = if r.minw < l.minw { r } else { l };
            s.minw = c.minw;
            s.arg = c.arg;
            for child in [l, r] {
                if child.ver == epoch && child.best < s.best {
                    s.best = child.best;
                    s.bleaf = child.bleaf;
                    s.bsrc = child.bsrc;
                }
            }
        }
        if s.tag < INF && s.minw < INF {
            let own = s.tag + s.minw;
            if own < s.best {
                s.best = own;
                s.bleaf = s.arg;
                s.bsrc = s.tsrc;
            }
        }
        self.slots[node] = s;
    }

    fn chmin(&mut self, l: usize, r: usize, c: Cost, src: u32) {
        if l < r {
            self.chmin_at(1, 0, self.size, l, r, c, src);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn chmin_at(&mut self, node: usize, nl: usize, nr: usize, l: usize, r: usize, c: Cost, src: u32) {
        if r <= nl || nr <= l {
            return;
        }
        if l <= nl && nr <= r {
            let s = &mut self.slots[node];
            if s.ver != self.epoch || c < s.tag {
                s.ver = self.epoch;
                s.tag = c;
                s.tsrc = src;
                self.pull(node);
            }
            return;
        }
        let mid = (nl + nr) / 2;
        self.chmin_at(2 * node, nl, mid, l, r, c, src);
        self.chmin_at(2 * node + 1, mid, nr, l, r, c, src);
        self.pull(node);
    }

    fn set(&mut self, leaf: usize, w: Cost) {
        let mut node = self.size + leaf;
        self.slots[node].minw = w;
        self.pull(node);
        while node > 1 {
            node /= 2;
            self.pull(node);
        }
    }

    /// `(value, leaf, source)` of the smallest offer in this epoch.
    fn best(&self) -> Option<(Cost, usize, u32)> {
        let s = &self.slots[1];
        (s.ver == self.epoch && s.best < INF).then_some((s.best, s.bleaf as usize, s.bsrc))
    }
}

/// One point's row of optimal prefix costs.
///
/// `costs[j]` is the least cost of a matching among the points up to and
/// including `point` in which every earlier point meets its demand (and
/// capacity) and `point` has at least `j` partners; `None` when no such
/// matching exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostRow {
    pub point: PointRef,
    pub costs: Vec<Option<Cost>>,
}

/// Cost rows of every point in ascending coordinate order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepTrace {
    pub rows: Vec<CostRow>,
}

impl SweepTrace {
    /// Whether every row is non-decreasing in `j`, with `None` above all costs.
    pub fn rows_monotone(&self) -> bool {
        self.rows.iter().all(|r| {
            r.costs.windows(2).all(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => a <= b,
                (None, Some(_)) => false,
                _ => true,
            })
        })
    }
}

pub(crate) fn cost_rows(inst: &Instance, mode: Mode) -> SweepTrace {
    let full = Bounds::of(inst, mode);
    let merged = inst.merged();
    let mut rows = Vec::with_capacity(merged.len());
    let (mut ys, mut zt) = (0, 0);
    for &p in &merged {
        match p.side {
            crate::Side::S => ys += 1,
            crate::Side::T => zt += 1,
        }
        let b = Bounds {
            lo_s: full.lo_s[..ys].to_vec(),
            hi_s: full.hi_s[..ys].to_vec(),
            lo_t: full.lo_t[..zt].to_vec(),
            hi_t: full.hi_t[..zt].to_vec(),
        };
        let (xs, xt) = (&inst.s_coords()[..ys], &inst.t_coords()[..zt]);
        let hi = match p.side {
            crate::Side::S => b.hi_s[p.index],
            crate::Side::T => b.hi_t[p.index],
        };
        let demand = inst.demand(p);
        let costs = (0..=demand)
            .map(|j| {
                if j > hi {
                    return None;
                }
                let mut bj = b.clone();
                match p.side {
                    crate::Side::S => bj.lo_s[p.index] = j,
                    crate::Side::T => bj.lo_t[p.index] = j,
                }
                let out = run(xs, xt, &bj);
                out.feasible
                    .then(|| out.pairs.iter().map(|&(i, t)| (xs[i] as Cost - xt[t] as Cost).abs()).sum())
            })
            .collect();
        rows.push(CostRow { point: p, costs });
    }
    SweepTrace { rows }
}
