use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

/// Inner nodes of `t` that keep both children, in canonical order.
pub fn two_child_nodes(t: &FiniteTree) -> Vec<BitString> {
    let mut out = Vec::new();
    for d in 0..t.height() {
        for v in &t.nodes_at(d) {
            if t.contains(&v.child(false)) && t.contains(&v.child(true)) {
                out.push(v.clone());
            }
        }
    }
    out
}

pub(crate) fn two_child_nodes_form_chain(t: &FiniteTree) -> bool {
    two_child_nodes(t)
        .windows(2)
        .all(|w| w[0].is_proper_prefix_of(&w[1]))
}

/// The main branch of a skeletal tree, or `None` when the branching nodes are
/// not the prefixes of a single string.
///
/// A node branches iff it prefixes a node keeping both children, so the tree
/// is skeletal iff those nodes form a chain; the deepest one is returned. A
/// tree with no branching at all is a single path and that path is returned.
pub fn is_skeletal(t: &FiniteTree) -> Option<BitString> {
    let splits = two_child_nodes(t);
    if !splits.windows(2).all(|w| w[0].is_proper_prefix_of(&w[1])) {
        return None;
    }
    match splits.last() {
        Some(z) => Some(z.clone()),
        None => t.leaves().first().cloned(),
    }
}

/// `2^n·μ(⟨Q⟩∩⟨z↾n⟩)` for `n = 0..=|z|`: the finite-depth conditional density
/// of `Q` along `z`.
pub fn density_profile(q: &FiniteTree, z: &BitString) -> Result<Vec<Dyadic>> {
    if z.len() > q.height() {
        return Err(Error::pre(format!(
            "prefix length {} exceeds tree height {}",
            z.len(),
            q.height()
        )));
    }
    Ok((0..=z.len())
        .map(|n| {
            let below = q.leaves_below(&z.prefix(n)).len() as u64;
            Dyadic::new(below, (q.height() - n) as u64)
        })
        .collect())
}

/// `Σ_{i<n} 2^{−(ℓ_{i+1}−ℓ_i)}`: the most a bottom-up prune can lose.
pub fn branching_budget(schedule: &LevelSchedule, n: usize) -> Dyadic {
    (0..n).map(|i| Dyadic::cylinder(schedule.gap(i))).sum()
}

/// The largest subtree of `p` in which every node at depth `ℓ_i`, `i < n`,
/// has at least two extensions at depth `ℓ_{i+1}`; `None` if no nonempty one
/// exists.
///
/// Such subtrees are closed under union, so the largest one is the set of
/// nodes that survive a bottom-up pass discarding every schedule node with
/// fewer than two surviving extensions. Whenever `μ(p)` exceeds
/// [`branching_budget`] the root survives.
pub fn prune_to_branching(
    p: &FiniteTree,
    schedule: &LevelSchedule,
    n: usize,
) -> Result<Option<FiniteTree>> {
    let h = schedule
        .try_value(n)
        .ok_or_else(|| Error::pre(format!("schedule {schedule} has no level {n}")))?;
    if p.height() != h {
        return Err(Error::pre(format!(
            "tree height {} is not the level-{n} depth {h}",
            p.height()
        )));
    }
    let mut good: StringSet = p.leaves().clone();
    for i in (0..n).rev() {
        let lo = schedule.value(i);
        let hi = schedule.value(i + 1);
        let mut up = StringSet::new();
        let mut ext: Vec<&BitString> = Vec::new();
        let mut current: Option<BitString> = None;
        // `good` is sorted, so extensions of one node are contiguous
        for t in &good {
            let head = t.prefix(lo);
            let mid = t.prefix(hi);
            if current.as_ref() != Some(&head) {
                current = Some(head);
                ext.clear();
            }
            if ext.last().map(|e| e.prefix(hi)) != Some(mid) {
                ext.push(t);
            }
            if ext.len() == 2 {
                up.insert(current.clone().expect("set above"));
            }
        }
        good = good
            .into_iter()
            .filter(|t| up.contains(&t.prefix(lo)))
            .collect();
    }
    if good.is_empty() {
        return Ok(None);
    }
    Ok(Some(FiniteTree::new(h, good)?))
}
