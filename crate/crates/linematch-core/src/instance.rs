use alloc::vec::Vec;
use core::fmt;

/// Which of the two point sets a point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    S,
    T,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::S => Side::T,
            Side::T => Side::S,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::S => "S",
            Side::T => "T",
        })
    }
}

/// A point identified by its side and its rank within that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointRef {
    pub side: Side,
    pub index: usize,
}

impl PointRef {
    pub fn s(index: usize) -> Self {
        PointRef { side: Side::S, index }
    }

    pub fn t(index: usize) -> Self {
        PointRef { side: Side::T, index }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.side, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    NonPositiveDemand {
        side: Side,
        index: usize,
        value: i64,
    },
    CapBelowDemand {
        side: Side,
        index: usize,
        demand: i64,
        cap: i64,
    },
    DuplicateCoordinate {
        value: i64,
    },
    /// A demand exceeds the number of points on the other side; since pairs
    /// are distinct it can never be met.
    InfeasibleDemand {
        side: Side,
        index: usize,
        demand: i64,
        available: usize,
    },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::LengthMismatch { field, expected, found } => {
                write!(f, "`{field}` has {found} entries, expected {expected}")
            }
            InstanceError::NonPositiveDemand { side, index, value } => {
                write!(f, "demand of {side}[{index}] is {value}; demands must be positive")
            }
            InstanceError::CapBelowDemand { side, index, demand, cap } => {
                write!(f, "capacity {cap} of {side}[{index}] is below its demand {demand}")
            }
            InstanceError::DuplicateCoordinate { value } => write!(
                f,
                "coordinate {value} occurs more than once; points must be distinct \
                 (perturb coincident points symbolically before solving)"
            ),
            InstanceError::InfeasibleDemand { side, index, demand, available } => write!(
                f,
                "demand {demand} of {side}[{index}] exceeds the {available} point(s) on the other side"
            ),
        }
    }
}

impl core::error::Error for InstanceError {}

/// Unvalidated problem input, in caller order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub s: Vec<i64>,
    pub t: Vec<i64>,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub cap_s: Option<Vec<i64>>,
    pub cap_t: Option<Vec<i64>>,
}

impl RawInstance {
    pub fn demands(s: Vec<i64>, alpha: Vec<i64>, t: Vec<i64>, beta: Vec<i64>) -> Self {
        RawInstance { s, t, alpha, beta, cap_s: None, cap_t: None }
    }

    pub fn with_caps(mut self, cap_s: Vec<i64>, cap_t: Vec<i64>) -> Self {
        self.cap_s = Some(cap_s);
        self.cap_t = Some(cap_t);
        self
    }

    /// Normalizes and discards the permutation back to caller order.
    pub fn validate(self) -> Result<Instance, InstanceError> {
        self.normalize().map(|n| n.instance)
    }

    /// Sorts each side by coordinate (carrying demands and capacities along)
    /// and checks every precondition, including that no demand exceeds the
    /// size of the opposite side.
    pub fn normalize(self) -> Result<Normalized, InstanceError> {
        let n = self.normalize_structure()?;
        let inst = &n.instance;
        for side in [Side::S, Side::T] {
            let available = inst.len(side.opposite());
            for index in 0..inst.len(side) {
                let demand = inst.demand(PointRef { side, index });
                if demand as usize > available {
                    let raw_index = match side {
                        Side::S => n.s_order[index],
                        Side::T => n.t_order[index],
                    };
                    return Err(InstanceError::InfeasibleDemand {
                        side,
                        index: raw_index,
                        demand: demand as i64,
                        available,
                    });
                }
            }
        }
        Ok(n)
    }

    /// Like [`normalize`](Self::normalize) but accepts demands larger than the
    /// opposite side. Solvers report such instances as infeasible.
    pub fn normalize_structure(self) -> Result<Normalized, InstanceError> {
        let y = self.s.len();
        let z = self.t.len();
        check_len("alpha", y, self.alpha.len())?;
        check_len("beta", z, self.beta.len())?;
        if let Some(c) = &self.cap_s {
            check_len("cap_s", y, c.len())?;
        }
        if let Some(c) = &self.cap_t {
            check_len("cap_t", z, c.len())?;
        }

        for (side, demands) in [(Side::S, &self.alpha), (Side::T, &self.beta)] {
            if let Some((index, &value)) = demands.iter().enumerate().find(|(_, &d)| d <= 0) {
                return Err(InstanceError::NonPositiveDemand { side, index, value });
            }
        }
        for (side, demands, caps) in [(Side::S, &self.alpha, &self.cap_s), (Side::T, &self.beta, &self.cap_t)]
        {
            if let Some(caps) = caps {
                for (index, (&demand, &cap)) in demands.iter().zip(caps).enumerate() {
                    if cap < demand {
                        return Err(InstanceError::CapBelowDemand { side, index, demand, cap });
                    }
                }
            }
        }

        let mut all: Vec<i64> = self.s.iter().chain(&self.t).copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(InstanceError::DuplicateCoordinate { value: w[0] });
        }

        let s_order = sorted_order(&self.s);
        let t_order = sorted_order(&self.t);
        let permute = |v: &[i64], order: &[usize]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        // Capacities above the opposite side size are equivalent to it.
        let clamp = |v: Vec<i64>, limit: usize| -> Vec<u32> {
            v.into_iter().map(|c| c.min(limit as i64).min(u32::MAX as i64) as u32).collect()
        };
        let saturate =
            |v: Vec<i64>| -> Vec<u32> { v.into_iter().map(|d| d.min(u32::MAX as i64) as u32).collect() };

        let instance = Instance {
            s: permute(&self.s, &s_order),
            t: permute(&self.t, &t_order),
            alpha: saturate(permute(&self.alpha, &s_order)),
            beta: saturate(permute(&self.beta, &t_order)),
            cap_s: self.cap_s.as_deref().map(|c| clamp(permute(c, &s_order), z)),
            cap_t: self.cap_t.as_deref().map(|c| clamp(permute(c, &t_order), y)),
        };
        Ok(Normalized { instance, s_order, t_order })
    }
}

fn check_len(field: &'static str, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected == found {
        Ok(())
    } else {
        Err(InstanceError::LengthMismatch { field, expected, found })
    }
}

fn sorted_order(coords: &[i64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_key(|&i| coords[i]);
    order
}

/// A validated instance together with the permutation from sorted rank back
/// to the caller's original index on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub instance: Instance,
    /// `s_order[rank]` is the caller index of the S point at that rank.
    pub s_order: Vec<usize>,
    pub t_order: Vec<usize>,
}

impl Normalized {
    pub fn to_original(&self, pair: (usize, usize)) -> (usize, usize) {
        (self.s_order[pair.0], self.t_order[pair.1])
    }

    /// Maps a caller-indexed pair to sorted ranks. `None` if out of range.
    pub fn from_original(&self, pair: (usize, usize)) -> Option<(usize, usize)> {
        let s = self.s_order.iter().position(|&o| o == pair.0)?;
        let t = self.t_order.iter().position(|&o| o == pair.1)?;
        Some((s, t))
    }
}

/// A normalized problem: both sides sorted ascending, all coordinates
/// distinct, demands positive and at most the opposite side's size, and
/// capacities (when present) at least the demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    s: Vec<i64>,
    t: Vec<i64>,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    cap_s: Option<Vec<u32>>,
    cap_t: Option<Vec<u32>>,
}

impl Instance {
    pub fn empty() -> Self {
        Instance {
            s: Vec::new(),
            t: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            cap_s: None,
            cap_t: None,
        }
    }

    pub fn s_coords(&self) -> &[i64] {
        &self.s
    }

    pub fn t_coords(&self) -> &[i64] {
        &self.t
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u32] {
        &self.beta
    }

    pub fn cap_s(&self) -> Option<&[u32]> {
        self.cap_s.as_deref()
    }

    pub fn cap_t(&self) -> Option<&[u32]> {
        self.cap_t.as_deref()
    }

    pub fn has_caps(&self) -> bool {
        self.cap_s.is_some() || self.cap_t.is_some()
    }

    pub fn y(&self) -> usize {
        self.s.len()
    }

    pub fn z(&self) -> usize {
        self.t.len()
    }

    pub fn n(&self) -> usize {
        self.s.len() + self.t.len()
    }

    pub fn len(&self, side: Side) -> usize {
        match side {
            Side::S => self.s.len(),
            Side::T => self.t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    pub fn coord(&self, p: PointRef) -> i64 {
        match p.side {
            Side::S => self.s[p.index],
            Side::T => self.t[p.index],
        }
    }

    pub fn demand(&self, p: PointRef) -> u32 {
        match p.side {
            Side::S => self.alpha[p.index],
            Side::T => self.beta[p.index],
        }
    }

    /// Capacity of `p`; a point without an explicit capacity may be matched to
    /// every point of the other side.
    pub fn cap(&self, p: PointRef) -> u32 {
        let (caps, limit) = match p.side {
            Side::S => (&self.cap_s, self.t.len()),
            Side::T => (&self.cap_t, self.s.len()),
        };
        caps.as_ref().map_or(limit as u32, |c| c[p.index])
    }

    /// The same instance with capacities dropped.
    pub fn without_caps(&self) -> Instance {
        Instance { cap_s: None, cap_t: None, ..self.clone() }
    }

    /// Sum of demands on one side.
    pub fn total_demand(&self, side: Side) -> u64 {
        let d = match side {
            Side::S => &self.alpha,
            Side::T => &self.beta,
        };
        d.iter().map(|&x| x as u64).sum()
    }

    /// All points in ascending coordinate order.
    pub fn merged(&self) -> Vec<PointRef> {
        let mut out = Vec::with_capacity(self.n());
        let (mut i, mut j) = (0, 0);
        while i < self.s.len() || j < self.t.len() {
            if j == self.t.len() || (i < self.s.len() && self.s[i] < self.t[j]) {
                out.push(PointRef::s(i));
                i += 1;
            } else {
                out.push(PointRef::t(j));
                j += 1;
            }
        }
        out
    }

    /// Distance between `S[i]` and `T[j]`.
    pub fn distance(&self, i: usize, j: usize) -> crate::Cost {
        (self.s[i] as i128 - self.t[j] as i128).abs()
    }
}
