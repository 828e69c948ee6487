use alloc::vec::Vec;

use crate::instance::{Instance, PointRef};

/// Whether some duplicate-free set of pairs gives every point a degree
/// between its demand and its capacity.
///
/// For the complete bipartite graph with unit edges the circulation has a
/// feasible flow iff, for every `a`, the `a` largest S-demands sum to at most
/// `Σ_t min(cap_t, a)`, and symmetrically for T. Both families are checked in
/// one pass over each sorted demand list.
pub fn feasibility_flow_check(inst: &Instance) -> bool {
    let cap_s: Vec<u32> = (0..inst.y()).map(|i| inst.cap(PointRef::s(i))).collect();
    let cap_t: Vec<u32> = (0..inst.z()).map(|j| inst.cap(PointRef::t(j))).collect();
    side_ok(inst.alpha(), &cap_t) && side_ok(inst.beta(), &cap_s)
}

fn side_ok(demands: &[u32], other_caps: &[u32]) -> bool {
    let mut demands = demands.to_vec();
    demands.sort_unstable_by(|a, b| b.cmp(a));
    let mut caps = other_caps.to_vec();
    caps.sort_unstable();

    // supply(a) = Σ min(cap, a), maintained with a pointer into the sorted caps.
    let mut below = 0usize;
    let mut below_sum = 0u64;
    let mut need = 0u64;
    for (k, &d) in demands.iter().enumerate() {
        let a = k as u64 + 1;
        need += d as u64;
        while below < caps.len() && (caps[below] as u64) < a {
            below_sum += caps[below] as u64;
            below += 1;
        }
        let supply = below_sum + a * (caps.len() - below) as u64;
        if need > supply {
            return false;
        }
    }
    true
}
