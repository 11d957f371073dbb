//! Finite pruned trees, stored as the set of their maximal-depth leaves.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::stringset::StringSet;

/// A nonempty finite tree of a declared height.
///
/// The node set is the set of all prefixes of `leaves`, so every node extends
/// to a leaf. Trees compare by height, then number of leaves, then leaf list.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteTree {
    height: usize,
    leaves: StringSet,
}

impl FiniteTree {
    pub fn new(height: usize, leaves: StringSet) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::pre("a finite tree needs at least one leaf"));
        }
        if let Some(bad) = leaves.iter().find(|s| s.len() != height) {
            return Err(Error::pre(format!(
                "leaf {bad} does not have the declared height {height}"
            )));
        }
        Ok(FiniteTree { height, leaves })
    }

    /// Height inferred from the (equal-length) leaves.
    pub fn from_leaves(leaves: StringSet) -> Result<Self> {
        let h = leaves
            .first()
            .map(BitString::len)
            .ok_or_else(|| Error::pre("a finite tree needs at least one leaf"))?;
        FiniteTree::new(h, leaves)
    }

    /// The full binary tree of height `h`.
    pub fn full(h: usize) -> Self {
        FiniteTree {
            height: h,
            leaves: StringSet::level(h),
        }
    }

    /// The height-`h` truncation of the cylinder `⟨sigma⟩`.
    pub fn cylinder(sigma: &BitString, h: usize) -> Result<Self> {
        if sigma.len() > h {
            return Err(Error::pre("cylinder root is deeper than the tree"));
        }
        let leaves = BitString::all_of_length(h - sigma.len())
            .map(|t| sigma.concat(&t))
            .collect();
        FiniteTree::new(h, leaves)
    }

    pub fn root_only() -> Self {
        FiniteTree {
            height: 0,
            leaves: StringSet::singleton(BitString::empty()),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn leaves(&self) -> &StringSet {
        &self.leaves
    }

    pub fn into_leaves(self) -> StringSet {
        self.leaves
    }

    /// Leaves extending `sigma`.
    pub fn leaves_below(&self, sigma: &BitString) -> StringSet {
        if sigma.len() > self.height {
            return StringSet::new();
        }
        let pad = self.height - sigma.len();
        let lo = sigma.concat(&BitString::from_bits(vec![false; pad]));
        let hi = sigma.concat(&BitString::from_bits(vec![true; pad]));
        self.leaves.range(lo..=hi).cloned().collect()
    }

    pub fn contains(&self, sigma: &BitString) -> bool {
        if sigma.len() > self.height {
            return false;
        }
        let pad = self.height - sigma.len();
        let lo = sigma.concat(&BitString::from_bits(vec![false; pad]));
        let hi = sigma.concat(&BitString::from_bits(vec![true; pad]));
        self.leaves.range(lo..=hi).next().is_some()
    }

    /// `T ∩ 2^d`.
    pub fn nodes_at(&self, depth: usize) -> StringSet {
        if depth > self.height {
            return StringSet::new();
        }
        self.leaves.iter().map(|l| l.prefix(depth)).collect()
    }

    /// Every node, in canonical order.
    pub fn nodes(&self) -> StringSet {
        let mut out = StringSet::new();
        for d in 0..=self.height {
            out.extend(self.nodes_at(d));
        }
        out
    }

    /// Nodes at `depth` extending `sigma`.
    pub fn extensions(&self, sigma: &BitString, depth: usize) -> StringSet {
        if depth < sigma.len() {
            return StringSet::new();
        }
        self.leaves_below(sigma)
            .iter()
            .map(|l| l.prefix(depth))
            .collect()
    }

    /// `sigma` has two incomparable extensions in the tree, i.e. at least two
    /// leaves below it.
    pub fn branches(&self, sigma: &BitString) -> bool {
        self.leaves_below(sigma).len() >= 2
    }

    /// `T↾k = T ∩ 2^{≤k}`.
    pub fn truncate(&self, k: usize) -> Result<FiniteTree> {
        if k > self.height {
            return Err(Error::pre(format!(
                "cannot truncate a height-{} tree to {k}",
                self.height
            )));
        }
        Ok(FiniteTree {
            height: k,
            leaves: self.nodes_at(k),
        })
    }

    /// `μ(⟨leaves⟩) = |leaves| / 2^height`.
    pub fn leaf_measure(&self) -> Dyadic {
        Dyadic::new(self.leaves.len() as u64, self.height as u64)
    }

    /// Leaf-set inclusion between trees of equal height.
    pub fn is_subtree_of(&self, other: &FiniteTree) -> bool {
        self.height == other.height && self.leaves.is_subset(&other.leaves)
    }

    /// Serializes in the `tree-leaves` v1 format: `height=<h>` then one leaf per line.
    pub fn to_leaves_format(&self) -> String {
        let mut out = format!("height={}\n", self.height);
        for l in &self.leaves {
            out.push_str(&l.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_leaves_format(text: &str) -> Result<FiniteTree> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tree-leaves input".into()))?;
        let h: usize = header
            .strip_prefix("height=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad tree-leaves header {header:?}")))?;
        let leaves = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.parse::<BitString>())
            .collect::<Result<StringSet>>()?;
        FiniteTree::new(h, leaves)
    }
}

impl Ord for FiniteTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height
            .cmp(&other.height)
            .then_with(|| self.leaves.len().cmp(&other.leaves.len()))
            .then_with(|| self.leaves.iter().cmp(other.leaves.iter()))
    }
}

impl PartialOrd for FiniteTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteTree(h={}, {})", self.height, self.leaves)
    }
}

/// Shorthand for tests: a tree from its leaf words.
pub fn tree(words: &[&str]) -> FiniteTree {
    FiniteTree::from_leaves(crate::stringset::set(words)).expect("valid leaf list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use crate::stringset::set;

    #[test]
    fn rejects_malformed() {
        assert!(FiniteTree::new(2, StringSet::new()).is_err());
        assert!(FiniteTree::new(2, set(&["00", "1"])).is_err());
    }

    #[test]
    fn node_queries() {
        let t = tree(&["000", "001", "100"]);
        assert!(t.contains(&bs("")));
        assert!(t.contains(&bs("10")));
        assert!(!t.contains(&bs("11")));
        assert!(!t.contains(&bs("0000")));
        assert_eq!(t.nodes_at(1), set(&["0", "1"]));
        assert_eq!(t.extensions(&bs("0"), 3), set(&["000", "001"]));
        assert!(t.branches(&bs("")));
        assert!(t.branches(&bs("00")));
        assert!(!t.branches(&bs("1")));
        assert_eq!(t.nodes().len(), 1 + 2 + 2 + 3);
    }

    #[test]
    fn truncation_and_measure() {
        let t = tree(&["000", "001", "100"]);
        assert_eq!(t.truncate(1).unwrap(), tree(&["0", "1"]));
        assert_eq!(t.leaf_measure(), "3/8".parse().unwrap());
        assert!(t.truncate(4).is_err());
        assert_eq!(
            FiniteTree::cylinder(&bs("0"), 2).unwrap(),
            tree(&["00", "01"])
        );
    }

    #[test]
    fn leaves_format_round_trip() {
        let t = tree(&["1010", "0110", "0101"]);
        let text = t.to_leaves_format();
        assert_eq!(text, "height=4\n0101\n0110\n1010\n");
        assert_eq!(FiniteTree::parse_leaves_format(&text).unwrap(), t);
        let root = FiniteTree::root_only();
        assert_eq!(
            FiniteTree::parse_leaves_format(&root.to_leaves_format()).unwrap(),
            root
        );
    }

    #[test]
    fn canonical_order() {
        let mut v = [
            tree(&["00", "11"]),
            tree(&["00", "01", "11"]),
            tree(&["10"]),
        ];
        v.sort();
        assert_eq!(v[0], tree(&["10"]));
        assert_eq!(v[1], tree(&["00", "11"]));
    }
}
