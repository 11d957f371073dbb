use serde::Serialize;
use std::collections::BTreeSet;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::stringset::StringSet;
use crate::tree::FiniteTree;
use crate::treespace::{enumerate_class, TreeClass};

/// Exact mode searches every subset of at most this many candidate strings.
pub const EXACT_CANDIDATE_LIMIT: usize = 20;

/// Largest exponent used for fixed-point candidate weights.
const MAX_WEIGHT_EXP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingCost {
    pub mode: CostMode,
    /// `μ(⟨H⟩ ∩ Q)` for the returned `H`.
    pub cost: Dyadic,
    pub set: StringSet,
}

/// Cheapest (exact) or greedy `H ⊆ 2^{level_len}` hitting `class`, priced by
/// `μ(⟨H⟩ ∩ ⟨Q⟩)` with `Q` read through its leaves.
///
/// Exact ties go to the lowest bitmask over candidates in canonical order.
/// Greedy repeatedly adds the candidate hitting the most not-yet-hit members
/// per unit of measure, earliest candidate on ties.
pub fn hitting_cost(
    class: &TreeClass,
    q: &FiniteTree,
    level_len: usize,
    mode: CostMode,
    cap: usize,
) -> Result<HittingCost> {
    let candidates = 1usize.checked_shl(level_len as u32).filter(|&c| c > 0);
    let n_cand = match (mode, candidates) {
        (CostMode::Exact, Some(c)) if c <= EXACT_CANDIDATE_LIMIT => c,
        (CostMode::Exact, _) => {
            return Err(Error::CapExceeded {
                cap: EXACT_CANDIDATE_LIMIT,
            })
        }
        (CostMode::Greedy, Some(c)) if level_len < 32 => c,
        (CostMode::Greedy, _) => {
            return Err(Error::pre(format!("level length {level_len} is too large")))
        }
    };
    let exp = q.height().max(level_len);
    if exp > MAX_WEIGHT_EXP {
        return Err(Error::pre(format!(
            "depth {exp} exceeds the weight precision limit {MAX_WEIGHT_EXP}"
        )));
    }
    let weights = candidate_weights(q, level_len, exp);

    let members = enumerate_class(class, cap)?;
    if members.is_empty() {
        return Ok(HittingCost {
            mode,
            cost: Dyadic::zero(),
            set: StringSet::new(),
        });
    }
    if level_len > class.height {
        return Err(Error::pre(format!(
            "no string of length {level_len} is a node of a height-{} tree",
            class.height
        )));
    }
    let incidence: Vec<Vec<usize>> = members
        .iter()
        .map(|t| {
            t.nodes_at(level_len)
                .iter()
                .map(|s| s.to_u64() as usize)
                .collect()
        })
        .collect();

    let chosen = match mode {
        CostMode::Exact => exact(&incidence, &weights),
        CostMode::Greedy => greedy(&incidence, &weights, n_cand),
    };
    let cost = Dyadic::new(chosen.iter().map(|&i| weights[i]).sum::<u128>(), exp as u64);
    let set = chosen
        .into_iter()
        .map(|i| BitString::from_u64(i as u64, level_len))
        .collect();
    Ok(HittingCost { mode, cost, set })
}

/// `μ(⟨τ⟩ ∩ ⟨Q⟩)·2^exp` for every `τ` of length `len`, indexed by `τ` as a number.
fn candidate_weights(q: &FiniteTree, len: usize, exp: usize) -> Vec<u128> {
    let h = q.height();
    let mut w = vec![0u128; 1 << len];
    for leaf in q.leaves() {
        if len <= h {
            w[leaf.prefix(len).to_u64() as usize] += 1u128 << (exp - h);
        } else {
            // every extension of the leaf to length `len` is fully inside ⟨Q⟩
            let base = (leaf.to_u64() as usize) << (len - h);
            for cell in w.iter_mut().skip(base).take(1 << (len - h)) {
                *cell = 1;
            }
        }
    }
    w
}

fn exact(incidence: &[Vec<usize>], weights: &[u128]) -> Vec<usize> {
    // keep only inclusion-minimal member masks: hitting those hits the rest
    let masks: BTreeSet<u32> = incidence
        .iter()
        .map(|inc| inc.iter().fold(0u32, |m, &i| m | 1 << i))
        .collect();
    let minimal: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect();
    let n = weights.len();
    let mut best: Option<(u128, u32)> = None;
    for choice in 0u32..(1u32 << n) {
        let cost: u128 = (0..n)
            .filter(|&i| choice >> i & 1 == 1)
            .map(|i| weights[i])
            .sum();
        if best.is_some_and(|(c, _)| cost >= c) {
            continue;
        }
        if minimal.iter().all(|&m| m & choice != 0) {
            best = Some((cost, choice));
        }
    }
    let (_, choice) = best.expect("the full candidate set hits every member");
    (0..n).filter(|&i| choice >> i & 1 == 1).collect()
}

fn greedy(incidence: &[Vec<usize>], weights: &[u128], n_cand: usize) -> Vec<usize> {
    let mut hit = vec![false; incidence.len()];
    let mut left = incidence.len();
    let mut chosen = Vec::new();
    let mut taken = vec![false; n_cand];
    while left > 0 {
        let mut gain = vec![0u128; n_cand];
        for (m, inc) in incidence.iter().enumerate() {
            if !hit[m] {
                for &i in inc {
                    gain[i] += 1;
                }
            }
        }
        let mut best: Option<usize> = None;
        for i in 0..n_cand {
            if taken[i] || gain[i] == 0 {
                continue;
            }
            // gain[i]/w[i] > gain[b]/w[b], with zero weight counting as infinite ratio
            let better = match best {
                None => true,
                Some(b) => gain[i] * weights[b] > gain[b] * weights[i],
            };
            if better {
                best = Some(i);
            }
        }
        let b = best.expect("every member contains some candidate");
        taken[b] = true;
        chosen.push(b);
        for (m, inc) in incidence.iter().enumerate() {
            if !hit[m] && inc.contains(&b) {
                hit[m] = true;
                left -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}
