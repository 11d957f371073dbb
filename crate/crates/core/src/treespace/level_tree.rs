use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rng::{random_word, RngSeed};
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

/// A prefix `T↾ℓ_n` of a tree in `T_ℓ`: every node at depth `ℓ_k`, `k < n`,
/// has one or two extensions at depth `ℓ_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTree {
    schedule: LevelSchedule,
    level: usize,
    tree: FiniteTree,
}

impl LevelTree {
    pub fn new(schedule: LevelSchedule, level: usize, tree: FiniteTree) -> Result<Self> {
        let h = schedule
            .try_value(level)
            .ok_or_else(|| Error::pre(format!("schedule {schedule} has no level {level}")))?;
        if tree.height() != h {
            return Err(Error::pre(format!(
                "tree height {} is not the level-{level} depth {h}",
                tree.height()
            )));
        }
        for k in 0..level {
            let (lo, hi) = (schedule.value(k), schedule.value(k + 1));
            for node in &tree.nodes_at(lo) {
                let ext = tree.extensions(node, hi).len();
                if ext > 2 {
                    return Err(Error::pre(format!(
                        "node {node} at level {k} has {ext} extensions at depth {hi}"
                    )));
                }
            }
        }
        Ok(LevelTree {
            schedule,
            level,
            tree,
        })
    }

    pub fn root(schedule: LevelSchedule) -> Self {
        LevelTree {
            schedule,
            level: 0,
            tree: FiniteTree::root_only(),
        }
    }

    pub fn schedule(&self) -> &LevelSchedule {
        &self.schedule
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tree(&self) -> &FiniteTree {
        &self.tree
    }

    pub fn into_tree(self) -> FiniteTree {
        self.tree
    }

    /// `T ∩ 2^{ℓ_k}`.
    pub fn slice(&self, k: usize) -> StringSet {
        self.tree.nodes_at(self.schedule.value(k))
    }

    pub fn branching_defects(&self) -> Vec<(usize, BitString)> {
        branching_defects(&self.tree, &self.schedule, self.level)
    }

    /// Probability that the leaf-wise two-draw process grows exactly this prefix.
    pub fn process_probability(&self) -> Dyadic {
        let mut p = Dyadic::one();
        for k in 0..self.level {
            let (lo, hi) = (self.schedule.value(k), self.schedule.value(k + 1));
            let g = (hi - lo) as i64;
            for node in &self.tree.nodes_at(lo) {
                // one child: both draws agree; two children: either order
                let ways = self.tree.extensions(node, hi).len() as i64;
                p = &p * &Dyadic::pow2(ways - 1 - 2 * g);
            }
        }
        p
    }
}

/// Schedule nodes at levels `k < levels` with exactly one extension at depth
/// `ℓ_{k+1}`, in level order. Levels past the tree height are skipped.
pub fn branching_defects(
    tree: &FiniteTree,
    schedule: &LevelSchedule,
    levels: usize,
) -> Vec<(usize, BitString)> {
    let mut out = Vec::new();
    for k in 0..levels {
        let (Some(lo), Some(hi)) = (schedule.try_value(k), schedule.try_value(k + 1)) else {
            break;
        };
        if hi > tree.height() {
            break;
        }
        for node in &tree.nodes_at(lo) {
            if tree.extensions(node, hi).len() == 1 {
                out.push((k, node.clone()));
            }
        }
    }
    out
}

/// `|T_{ℓ_n}|`, the number of level-`n` prefixes of trees in `T_ℓ`.
///
/// Dynamic programming over the leaf count: each of `j` leaves independently
/// takes one of `2^g` single extensions or one of `C(2^g, 2)` pairs.
pub fn count_prefixes(schedule: &LevelSchedule, n: usize) -> Result<BigUint> {
    if !schedule.is_defined(n) {
        return Err(Error::pre(format!("schedule {schedule} has no level {n}")));
    }
    let mut by_leaves: BTreeMap<usize, BigUint> = BTreeMap::from([(1, BigUint::one())]);
    for k in 0..n {
        let g = schedule.gap(k);
        let singles = BigUint::one() << g;
        let pairs = (&singles * (&singles - 1u32)) >> 1u32;
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (&j, count) in &by_leaves {
            let mut binom = BigUint::one();
            for t in 0..=j {
                let ways = &binom * singles.pow((j - t) as u32) * pairs.pow(t as u32);
                *next.entry(j + t).or_insert_with(BigUint::zero) += count * ways;
                binom = binom * (j - t) / (t + 1);
            }
        }
        by_leaves = next;
    }
    Ok(by_leaves.into_values().sum())
}

/// Every level-`n` prefix of a tree in `T_ℓ`, sorted. Errors when the count
/// exceeds `cap`.
pub fn all_prefixes(schedule: &LevelSchedule, n: usize, cap: usize) -> Result<Vec<LevelTree>> {
    let total = count_prefixes(schedule, n)?;
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded { cap });
    }
    let mut layer = vec![StringSet::singleton(BitString::empty())];
    for k in 0..n {
        let ext: Vec<BitString> = BitString::all_of_length(schedule.gap(k)).collect();
        // one or two extensions for each leaf
        let mut choices = Vec::new();
        for (i, a) in ext.iter().enumerate() {
            choices.push(vec![a.clone()]);
            for b in &ext[i + 1..] {
                choices.push(vec![a.clone(), b.clone()]);
            }
        }
        let mut next = Vec::new();
        for leaves in layer {
            let mut partial = vec![StringSet::new()];
            for leaf in &leaves {
                partial = partial
                    .into_iter()
                    .flat_map(|acc| {
                        choices.iter().map(move |c| {
                            let mut acc = acc.clone();
                            acc.extend(c.iter().map(|e| leaf.concat(e)));
                            acc
                        })
                    })
                    .collect();
            }
            next.extend(partial);
        }
        layer = next;
    }
    let h = schedule.value(n);
    let mut out: Vec<LevelTree> = layer
        .into_iter()
        .map(|leaves| LevelTree {
            schedule: schedule.clone(),
            level: n,
            tree: FiniteTree::new(h, leaves).expect("nonempty leaves of height h"),
        })
        .collect();
    out.sort_by(|a, b| a.tree.cmp(&b.tree));
    Ok(out)
}

/// Grows a level-`n` prefix: every leaf at `ℓ_k` draws two uniform extensions
/// at `ℓ_{k+1}` with replacement.
pub fn sample_tree(schedule: &LevelSchedule, n: usize, seed: RngSeed) -> Result<LevelTree> {
    let mut rng = seed.rng();
    sample_tree_with(schedule, n, &mut rng)
}

/// [`sample_tree`] driven by a caller-held generator.
pub fn sample_tree_with<R: Rng + ?Sized>(
    schedule: &LevelSchedule,
    n: usize,
    rng: &mut R,
) -> Result<LevelTree> {
    if !schedule.is_defined(n) {
        return Err(Error::pre(format!("schedule {schedule} has no level {n}")));
    }
    let mut leaves = StringSet::singleton(BitString::empty());
    for k in 0..n {
        let g = schedule.gap(k);
        let mut next = StringSet::new();
        for leaf in &leaves {
            next.insert(leaf.concat(&random_word(rng, g)));
            next.insert(leaf.concat(&random_word(rng, g)));
        }
        leaves = next;
    }
    let tree = FiniteTree::new(schedule.value(n), leaves)?;
    Ok(LevelTree {
        schedule: schedule.clone(),
        level: n,
        tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use crate::tree::tree;

    fn gaps(g: &[usize]) -> LevelSchedule {
        LevelSchedule::from_gaps(g).unwrap()
    }

    /// Every nonempty leaf set of the right height, filtered by the level rule.
    fn brute_force_prefixes(s: &LevelSchedule, n: usize) -> Vec<FiniteTree> {
        let h = s.value(n);
        let words: Vec<BitString> = BitString::all_of_length(h).collect();
        (1u64..(1 << words.len()))
            .map(|mask| {
                let leaves = (0..words.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| words[i].clone())
                    .collect();
                FiniteTree::new(h, leaves).unwrap()
            })
            .filter(|t| LevelTree::new(s.clone(), n, t.clone()).is_ok())
            .collect()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_prefixes(&gaps(&[1]), 1).unwrap(), BigUint::from(3u32));
        assert_eq!(
            count_prefixes(&gaps(&[2]), 1).unwrap(),
            BigUint::from(10u32)
        );
        assert_eq!(
            count_prefixes(&gaps(&[1, 1]), 2).unwrap(),
            BigUint::from(15u32)
        );
        assert_eq!(count_prefixes(&gaps(&[1]), 0).unwrap(), BigUint::one());
    }

    #[test]
    fn count_matches_brute_force() {
        for g in [
            vec![1],
            vec![2],
            vec![1, 1],
            vec![1, 2],
            vec![2, 1],
            vec![1, 1, 1],
        ] {
            let s = gaps(&g);
            let n = g.len();
            assert_eq!(
                count_prefixes(&s, n).unwrap(),
                BigUint::from(brute_force_prefixes(&s, n).len()),
                "gaps {g:?}"
            );
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for g in [
            vec![1],
            vec![2],
            vec![1, 1],
            vec![1, 2],
            vec![2, 1],
            vec![1, 1, 1],
        ] {
            let s = gaps(&g);
            let n = g.len();
            let mut brute = brute_force_prefixes(&s, n);
            brute.sort();
            let listed: Vec<FiniteTree> = all_prefixes(&s, n, 10_000)
                .unwrap()
                .into_iter()
                .map(LevelTree::into_tree)
                .collect();
            assert_eq!(listed, brute, "gaps {g:?}");
        }
        assert_eq!(
            all_prefixes(&gaps(&[2, 2]), 2, 50).unwrap_err(),
            Error::CapExceeded { cap: 50 }
        );
    }

    #[test]
    fn process_probabilities_sum_to_one() {
        for g in [vec![1], vec![2], vec![1, 2], vec![1, 1, 1]] {
            let s = gaps(&g);
            let n = g.len();
            let total: Dyadic = brute_force_prefixes(&s, n)
                .into_iter()
                .map(|t| {
                    LevelTree::new(s.clone(), n, t)
                        .unwrap()
                        .process_probability()
                })
                .sum();
            assert_eq!(total, Dyadic::one(), "gaps {g:?}");
        }
    }

    #[test]
    fn defects_examples() {
        let s = gaps(&[1, 2]);
        let t = tree(&["000", "001", "100"]);
        assert_eq!(branching_defects(&t, &s, 2), vec![(1, bs("1"))]);
        assert!(branching_defects(&FiniteTree::full(3), &s, 2).is_empty());
        let full = LevelTree::new(LevelSchedule::square(), 2, FiniteTree::full(4)).unwrap_err();
        assert!(matches!(full, Error::Precondition(_)));
    }

    #[test]
    fn level_tree_validation() {
        let s = gaps(&[1, 1]);
        assert!(LevelTree::new(s.clone(), 2, tree(&["00", "01", "10", "11"])).is_ok());
        assert!(LevelTree::new(s.clone(), 2, tree(&["00", "01", "10"])).is_ok());
        assert!(LevelTree::new(s.clone(), 1, tree(&["00"])).is_err());
        assert!(LevelTree::new(gaps(&[2]), 1, tree(&["00", "01", "10"])).is_err());
    }

    #[test]
    fn root_sample_is_root() {
        for seed in 0..5 {
            let t = sample_tree(&LevelSchedule::square(), 0, RngSeed::new(seed, 0)).unwrap();
            assert_eq!(t.tree(), &FiniteTree::root_only());
        }
    }

    #[test]
    fn samples_are_level_trees() {
        let s: LevelSchedule = "n2+n".parse().unwrap();
        for seed in 0..10_000u64 {
            let t = sample_tree(&s, 3, RngSeed::new(seed, 3)).unwrap();
            LevelTree::new(s.clone(), 3, t.tree().clone()).unwrap();
            for k in 0..=3 {
                assert!(t.slice(k).len() <= 1 << k);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = LevelSchedule::linear(3).unwrap();
        let a = sample_tree(&s, 4, RngSeed::new(11, 2)).unwrap();
        let b = sample_tree(&s, 4, RngSeed::new(11, 2)).unwrap();
        assert_eq!(a, b);
    }

    /// Per-leaf single-child frequency at gap 3 is 1/8 within four binomial SE.
    #[test]
    fn single_child_rate_monte_carlo() {
        let s = LevelSchedule::linear(3).unwrap();
        let mut rng = RngSeed::new(2024, 0).rng();
        let n = 100_000;
        let singles = (0..n)
            .filter(|_| {
                sample_tree_with(&s, 1, &mut rng)
                    .unwrap()
                    .tree()
                    .leaves()
                    .len()
                    == 1
            })
            .count() as f64;
        let p = 1.0 / 8.0;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((singles / n as f64 - p).abs() <= 4.0 * se);
    }

    #[test]
    fn defect_free_doubles() {
        let s = LevelSchedule::linear(2).unwrap();
        for seed in 0..2000u64 {
            let t = sample_tree(&s, 3, RngSeed::new(seed, 0)).unwrap();
            let defects = t.branching_defects();
            let doubled = (0..=3).all(|k| t.slice(k).len() == 1 << k);
            assert_eq!(defects.is_empty(), doubled);
        }
    }
}
