//! Kraft–Chaitin code allocation, deficiency certificates and complexity oracles.

mod allocator;
mod oracle;

pub use allocator::{replay, KcAllocator, KcRequest};
pub use oracle::{
    run_length_bound, ComplexityOracle, FnOracle, MachineOracle, Provenance, StubOracle,
    TableOracle,
};

use std::collections::BTreeMap;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::measure::weight;
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

/// Requests `(σ, |σ|−n)` for every `σ ∈ V_n`, after checking
/// `Σ_{σ∈V_n} 2^{−|σ|} ≤ 2^{−2n}` for each `n ≥ 1`. The emitted weight is
/// `Σ_n 2^n·weight(V_n) ≤ Σ_n 2^{−n} < 1`.
pub fn deficiency_requests(family: &BTreeMap<usize, StringSet>) -> Result<Vec<KcRequest>> {
    let mut out = Vec::new();
    for (&n, v) in family {
        if n == 0 {
            return Err(Error::pre("deficiency levels start at n = 1"));
        }
        let w = weight(v);
        let bound = Dyadic::pow2(-2 * n as i64);
        if w > bound {
            return Err(Error::pre(format!(
                "level n = {n}: weight {w} exceeds 2^-{}",
                2 * n
            )));
        }
        out.extend(v.iter().map(|s| KcRequest::new(s.clone(), s.len() - n)));
    }
    Ok(out)
}

/// Total weight of a request list.
pub fn request_weight(requests: &[KcRequest]) -> Dyadic {
    requests.iter().map(KcRequest::weight).sum()
}

/// Depth-`depth` truncation of `{σ : upper(ρ) ≥ |ρ|−c for all ρ ⪯ σ}`, or
/// `None` when no string of that length survives. Since `upper` only bounds
/// complexity from above, this over-approximates the true class.
pub fn pc_truncation(oracle: &dyn ComplexityOracle, c: usize, depth: usize) -> Option<FiniteTree> {
    let ok = |s: &BitString| oracle.upper(s) + c >= s.len();
    if !ok(&BitString::empty()) {
        return None;
    }
    let mut layer = StringSet::singleton(BitString::empty());
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|s| [s.child(false), s.child(true)])
            .filter(ok)
            .collect();
        if layer.is_empty() {
            return None;
        }
    }
    FiniteTree::new(depth, layer).ok()
}

/// True iff `upper(z↾t_n) > t_n − c` at every checkpoint `0 < t_n ≤ |z|`.
pub fn checkpoint_deficiency(
    z: &BitString,
    checkpoints: &LevelSchedule,
    oracle: &dyn ComplexityOracle,
    c: usize,
) -> bool {
    (1..)
        .map_while(|n| checkpoints.try_value(n))
        .take_while(|&t| t <= z.len())
        .all(|t| oracle.upper(&z.prefix(t)) + c > t)
}
