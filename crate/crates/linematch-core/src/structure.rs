//! Structural checks on matchings.
//!
//! Each check looks for a local pattern that an exchange of pairs would make
//! strictly cheaper, so none of them can occur in a minimum-cost matching:
//!
//! - *crossing*: `a < b < c < d` with `a, d` on one side, pairs `(a, c)` and
//!   `(b, d)`, and neither `(a, b)` nor `(c, d)`. Swapping to `(a, b)`,
//!   `(c, d)` saves `2 (c - b)`.
//! - *nesting*: a pair `(a, d)` enclosing `b < c` with `b` opposite `a` and
//!   `c` on the side of `a`, and neither `(a, b)` nor `(c, d)`. Replacing
//!   `(a, d)` by `(a, b)`, `(c, d)` saves `c - b` and only raises degrees, so
//!   under capacities it applies when `b` and `c` both have room left.
//! - *skipping*: pairs `(b', a)` and `(a', b)` with `b' < a < b` and
//!   `a' < a` on the side of `a`. Depending on whether `a'` lies left or
//!   right of `b'` this is a nesting or a crossing pattern, and it is
//!   excused by the same completing pairs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::{Instance, PointRef, Side};
use crate::matching::{Matching, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Crossing,
    Nesting,
    Skipping,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::Crossing => "crossing",
            Pattern::Nesting => "nesting",
            Pattern::Skipping => "skipping",
        })
    }
}

/// A pattern occurrence; `points` are in ascending coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureViolation {
    pub pattern: Pattern,
    pub points: [PointRef; 4],
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.points;
        write!(f, "{} pattern at {a} < {b} < {c} < {d}", self.pattern)
    }
}

struct View<'a> {
    inst: &'a Instance,
    m: &'a Matching,
    mode: Mode,
    /// Pairs as `(left, right)` endpoints.
    spans: Vec<(PointRef, PointRef)>,
    merged: Vec<PointRef>,
    /// Rank of each point on the merged line.
    rank_s: Vec<usize>,
    rank_t: Vec<usize>,
}

impl<'a> View<'a> {
    fn new(inst: &'a Instance, m: &'a Matching, mode: Mode) -> Self {
        let merged = inst.merged();
        let mut rank_s = vec![0; inst.y()];
        let mut rank_t = vec![0; inst.z()];
        for (r, p) in merged.iter().enumerate() {
            match p.side {
                Side::S => rank_s[p.index] = r,
                Side::T => rank_t[p.index] = r,
            }
        }
        let spans = m
            .pairs()
            .iter()
            .map(|&(i, j)| {
                let (s, t) = (PointRef::s(i), PointRef::t(j));
                if inst.coord(s) < inst.coord(t) {
                    (s, t)
                } else {
                    (t, s)
                }
            })
            .collect();
        View { inst, m, mode, spans, merged, rank_s, rank_t }
    }

    fn rank(&self, p: PointRef) -> usize {
        match p.side {
            Side::S => self.rank_s[p.index],
            Side::T => self.rank_t[p.index],
        }
    }

    fn has(&self, p: PointRef, q: PointRef) -> bool {
        match (p.side, q.side) {
            (Side::S, Side::T) => self.m.contains(p.index, q.index),
            (Side::T, Side::S) => self.m.contains(q.index, p.index),
            _ => false,
        }
    }

    fn has_room(&self, p: PointRef) -> bool {
        self.mode == Mode::DemandOnly || self.m.degree(p) < self.inst.cap(p)
    }

    fn between(&self, lo: PointRef, hi: PointRef) -> &[PointRef] {
        &self.merged[self.rank(lo) + 1..self.rank(hi)]
    }

    fn crossing(&self, out: &mut Vec<StructureViolation>) {
        for &(a, c) in &self.spans {
            for &(b, d) in &self.spans {
                let ordered =
                    self.rank(a) < self.rank(b) && self.rank(b) < self.rank(c) && self.rank(c) < self.rank(d);
                if ordered && a.side == d.side && !self.has(a, b) && !self.has(c, d) {
                    out.push(StructureViolation { pattern: Pattern::Crossing, points: [a, b, c, d] });
                }
            }
        }
    }

    fn nesting(&self, out: &mut Vec<StructureViolation>) {
        for &(a, d) in &self.spans {
            let inner = self.between(a, d);
            for (k, &b) in inner.iter().enumerate() {
                if b.side == a.side || self.has(a, b) || !self.has_room(b) {
                    continue;
                }
                for &c in &inner[k + 1..] {
                    if c.side == a.side && !self.has(c, d) && self.has_room(c) {
                        out.push(StructureViolation { pattern: Pattern::Nesting, points: [a, b, c, d] });
                    }
                }
            }
        }
    }

    fn skipping(&self, out: &mut Vec<StructureViolation>) {
        for &(b1, a) in &self.spans {
            for &(a1, b) in &self.spans {
                if a1.side != a.side || self.rank(a1) >= self.rank(a) || self.rank(b) <= self.rank(a) {
                    continue;
                }
                let excused = if self.rank(a1) < self.rank(b1) {
                    self.has(a1, b1) || self.has(a, b) || !self.has_room(b1) || !self.has_room(a)
                } else {
                    self.has(b1, a1) || self.has(a, b)
                };
                if !excused {
                    let mut points = [b1, a1, a, b];
                    points.sort_by_key(|&p| self.rank(p));
                    out.push(StructureViolation { pattern: Pattern::Skipping, points });
                }
            }
        }
    }
}

/// Crossing patterns in `m`.
pub fn crossing_violations(inst: &Instance, m: &Matching) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    View::new(inst, m, Mode::DemandOnly).crossing(&mut out);
    out
}

/// Nesting patterns in `m`; under [`Mode::DemandAndCapacity`] only those
/// whose inner points both have spare capacity.
pub fn nesting_violations(inst: &Instance, m: &Matching, mode: Mode) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    View::new(inst, m, mode).nesting(&mut out);
    out
}

/// Skipping patterns in `m`, with the same capacity rule as nesting.
pub fn skipping_violations(inst: &Instance, m: &Matching, mode: Mode) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    View::new(inst, m, mode).skipping(&mut out);
    out
}

/// All three checks. Runs in `O(|M|² + |M| n²)`, meant for small instances.
pub fn structural_violations(inst: &Instance, m: &Matching, mode: Mode) -> Vec<StructureViolation> {
    let view = View::new(inst, m, mode);
    let mut out = Vec::new();
    view.crossing(&mut out);
    view.nesting(&mut out);
    view.skipping(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{solve, RawInstance};
    use proptest::prelude::*;

    fn unit(s: &[i64], t: &[i64]) -> Instance {
        RawInstance::demands(s.to_vec(), vec![1; s.len()], t.to_vec(), vec![1; t.len()]).validate().unwrap()
    }

    #[test]
    fn crossing_pairs_are_reported() {
        // s0=0 < t0=1 < t1=2 < s1=3 matched (s0,t1), (s1,t0).
        let i = unit(&[0, 3], &[1, 2]);
        let m = Matching::from_pairs(&i, [(0, 1), (1, 0)]).unwrap();
        let v = crossing_violations(&i, &m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].points, [PointRef::s(0), PointRef::t(0), PointRef::t(1), PointRef::s(1)]);
        let fixed = Matching::from_pairs(&i, [(0, 0), (1, 1)]).unwrap();
        assert!(crossing_violations(&i, &fixed).is_empty());
    }

    #[test]
    fn crossing_is_excused_by_a_completing_pair() {
        let i = unit(&[0, 3], &[1, 2]);
        let m = Matching::from_pairs(&i, [(0, 1), (1, 0), (0, 0)]).unwrap();
        assert!(crossing_violations(&i, &m).is_empty());
    }

    #[test]
    fn nesting_pairs_are_reported() {
        // s0=0 < t0=1 < s1=2 < t1=3 matched (s0,t1), (s1,t0).
        let i = unit(&[0, 2], &[1, 3]);
        let m = Matching::from_pairs(&i, [(0, 1), (1, 0)]).unwrap();
        let v = nesting_violations(&i, &m, Mode::DemandOnly);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].pattern, Pattern::Nesting);
        assert_eq!(v[0].points, [PointRef::s(0), PointRef::t(0), PointRef::s(1), PointRef::t(1)]);
        assert_eq!(structural_violations(&i, &m, Mode::DemandOnly).len(), 2);
    }

    #[test]
    fn nesting_needs_room_under_capacities() {
        let i = RawInstance::demands(vec![0, 2], vec![1, 1], vec![1, 3], vec![1, 1])
            .with_caps(vec![1, 1], vec![1, 1])
            .validate()
            .unwrap();
        let m = Matching::from_pairs(&i, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(nesting_violations(&i, &m, Mode::DemandOnly).len(), 1);
        assert!(nesting_violations(&i, &m, Mode::DemandAndCapacity).is_empty());
        assert!(skipping_violations(&i, &m, Mode::DemandAndCapacity).is_empty());
    }

    #[test]
    fn skipping_covers_both_orders() {
        // b'=t0 < a'=s0 < a=s1 < b=t1: crossing order.
        let i = unit(&[1, 2], &[0, 3]);
        let m = Matching::from_pairs(&i, [(1, 0), (0, 1)]).unwrap();
        let v = skipping_violations(&i, &m, Mode::DemandOnly);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].points, [PointRef::t(0), PointRef::s(0), PointRef::s(1), PointRef::t(1)]);
        // a'=s0 < b'=t0 < a=s1 < b=t1: nesting order.
        let i = unit(&[0, 2], &[1, 3]);
        let m = Matching::from_pairs(&i, [(1, 0), (0, 1)]).unwrap();
        assert_eq!(skipping_violations(&i, &m, Mode::DemandOnly).len(), 1);
    }

    #[test]
    fn empty_matching_is_clean() {
        let i = unit(&[0, 2], &[1, 3]);
        assert!(structural_violations(&i, &Matching::empty(&i), Mode::DemandOnly).is_empty());
    }

    proptest! {
        #[test]
        fn solver_output_is_clean(
            coords in proptest::sample::subsequence((0i64..40).collect::<Vec<_>>(), 2..11),
            sides in proptest::collection::vec(any::<bool>(), 11),
            extra in proptest::collection::vec((0u32..3, 0u32..3), 11),
        ) {
            let (mut s, mut t) = (Vec::new(), Vec::new());
            for (k, &x) in coords.iter().enumerate() {
                if sides[k] { s.push(x) } else { t.push(x) }
            }
            prop_assume!(!s.is_empty() && !t.is_empty());
            let (y, z) = (s.len() as u32, t.len() as u32);
            let alpha: Vec<i64> = (0..s.len()).map(|k| (1 + extra[k].0).min(z) as i64).collect();
            let beta: Vec<i64> = (0..t.len()).map(|k| (1 + extra[k].0).min(y) as i64).collect();
            let cap_s: Vec<i64> = alpha.iter().zip(&extra).map(|(&a, e)| a + e.1 as i64).collect();
            let cap_t: Vec<i64> = beta.iter().zip(&extra).map(|(&b, e)| b + e.1 as i64).collect();
            let i = RawInstance::demands(s, alpha, t, beta).with_caps(cap_s, cap_t).validate().unwrap();
            for mode in [Mode::DemandOnly, Mode::DemandAndCapacity] {
                if let Ok(sol) = solve(&i, mode) {
                    let v = structural_violations(&i, &sol.matching, mode);
                    prop_assert!(v.is_empty(), "{:?}", v);
                }
            }
        }
    }
}
