//! Hit-or-miss tools: hitting sets for finite tree classes, their cost inside
//! a tree, the pull-back to a shallower level, envelope checks and the
//! density boost.

mod boost;
mod cost;
mod envelope;

pub use boost::{boost_density, least_power_below, BoostResult};
pub use cost::{hitting_cost, CostMode, HittingCost, EXACT_CANDIDATE_LIMIT};
pub use envelope::{
    check_envelope, envelope_levels, tail_sum, Check, Condition, EnvelopeFamily, EnvelopeRow,
    TailSum,
};

use serde::Serialize;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::measure::measure_of_difference_within;
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;
use crate::treespace::{enumerate_class, TreeClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingReport {
    pub hits: bool,
    /// A member of the class containing no element of `H`, when `hits` is false.
    pub witness: Option<FiniteTree>,
}

/// Does `t` contain some member of `h` as a node?
pub fn tree_meets(t: &FiniteTree, h: &StringSet) -> bool {
    h.iter().any(|s| t.contains(s))
}

/// Whether every member of `class` contains an element of `h`; otherwise the
/// first missed member in canonical order.
pub fn hits(h: &StringSet, class: &TreeClass, cap: usize) -> Result<HittingReport> {
    let members = enumerate_class(class, cap)?;
    Ok(hits_members(h, &members))
}

pub(crate) fn hits_members(h: &StringSet, members: &[FiniteTree]) -> HittingReport {
    let witness = members.iter().find(|t| !tree_meets(t, h)).cloned();
    HittingReport {
        hits: witness.is_none(),
        witness,
    }
}

/// A subset of `h` that still hits `class` and from which no single element
/// can be dropped. Elements are tried for removal longest first, then in
/// reverse lexicographic order, so redundant refinements go before the
/// shorter strings covering them.
pub fn finite_subcover(h: &StringSet, class: &TreeClass, cap: usize) -> Result<StringSet> {
    let members = enumerate_class(class, cap)?;
    let report = hits_members(h, &members);
    if let Some(w) = report.witness {
        return Err(Error::pre(format!(
            "{h} does not hit the class; missed member {}",
            w.leaves()
        )));
    }
    let elems: Vec<&BitString> = h.iter().collect();
    // which elements each member contains
    let incidence: Vec<Vec<usize>> = members
        .iter()
        .map(|t| (0..elems.len()).filter(|&i| t.contains(elems[i])).collect())
        .collect();
    let mut keep = vec![true; elems.len()];
    for i in (0..elems.len()).rev() {
        keep[i] = false;
        if !incidence.iter().all(|inc| inc.iter().any(|&j| keep[j])) {
            keep[i] = true;
        }
    }
    Ok((0..elems.len())
        .filter(|&i| keep[i])
        .map(|i| elems[i].clone())
        .collect())
}

/// `{τ ∈ 2^{ℓ_n} : μ((⟨τ⟩ − ⟨H'⟩) ∩ Q) ≤ 2^{−ℓ_{n+1}}}` for `H' ⊆ 2^{ℓ_{n+1}}`.
///
/// The result `H` satisfies `μ((⟨H⟩ − ⟨H'⟩) ∩ Q) ≤ 2^{ℓ_n − ℓ_{n+1}}`.
pub fn pull_back(
    h_next: &StringSet,
    q: &FiniteTree,
    schedule: &LevelSchedule,
    n: usize,
) -> Result<StringSet> {
    let (Some(lo), Some(hi)) = (schedule.try_value(n), schedule.try_value(n + 1)) else {
        return Err(Error::pre(format!(
            "schedule {schedule} has no level {}",
            n + 1
        )));
    };
    if !h_next.all_of_length(hi) {
        return Err(Error::pre(format!("H' must lie in 2^{hi}")));
    }
    if q.height() < hi {
        return Err(Error::pre(format!(
            "Q has height {} below the level depth {hi}",
            q.height()
        )));
    }
    if lo >= 64 {
        return Err(Error::pre(format!(
            "level depth {lo} is too large to enumerate"
        )));
    }
    // leaves of Q outside ⟨H'⟩, grouped by their level-n prefix
    let slack = (q.height() - hi) as u32;
    let mut uncovered: std::collections::BTreeMap<BitString, u128> = Default::default();
    for leaf in q.leaves() {
        if !h_next.contains(&leaf.prefix(hi)) {
            *uncovered.entry(leaf.prefix(lo)).or_default() += 1;
        }
    }
    // each leaf weighs 2^{-h}; the threshold 2^{-ℓ_{n+1}} is 2^{h-ℓ_{n+1}} leaves
    let threshold = 1u128.checked_shl(slack).unwrap_or(u128::MAX);
    Ok(BitString::all_of_length(lo)
        .filter(|t| uncovered.get(t).is_none_or(|&c| c <= threshold))
        .collect())
}

/// `μ((⟨H⟩ − ⟨H'⟩) ∩ Q)`, the quantity bounded by [`pull_back`].
pub fn pull_back_excess(h: &StringSet, h_next: &StringSet, q: &FiniteTree) -> Dyadic {
    measure_of_difference_within(h, h_next, q.leaves())
}
