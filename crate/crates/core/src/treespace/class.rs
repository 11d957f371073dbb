use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

use super::shape::two_child_nodes_form_chain;

/// Default bound on live candidates during [`enumerate_class`].
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Every node of `F` is a node of the tree.
    Extends(FiniteTree),
    /// The tree truncated to `F`'s height is exactly `F`.
    Prefix(FiniteTree),
    /// Every node of the tree up to `Q`'s height is a node of `Q`.
    PathsInside(FiniteTree),
    /// Each node at a schedule depth has one or two extensions at the next
    /// schedule depth, for every level that fits inside the height.
    ScheduleBranching(LevelSchedule),
    /// The branching nodes are exactly the prefixes of one string.
    Skeletal,
}

/// A finite class of pruned trees of one height, cut out by a conjunction of
/// constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeClass {
    pub height: usize,
    pub constraints: Vec<Constraint>,
}

impl TreeClass {
    /// Every pruned tree of height `h`.
    pub fn all(height: usize) -> Self {
        TreeClass {
            height,
            constraints: Vec::new(),
        }
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn extends(self, f: FiniteTree) -> Self {
        self.with(Constraint::Extends(f))
    }

    pub fn prefix(self, f: FiniteTree) -> Self {
        self.with(Constraint::Prefix(f))
    }

    pub fn paths_inside(self, q: FiniteTree) -> Self {
        self.with(Constraint::PathsInside(q))
    }

    pub fn schedule_branching(self, s: LevelSchedule) -> Self {
        self.with(Constraint::ScheduleBranching(s))
    }

    pub fn skeletal(self) -> Self {
        self.with(Constraint::Skeletal)
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            match c {
                Constraint::Extends(f) | Constraint::Prefix(f) if f.height() > self.height => {
                    return Err(Error::pre(format!(
                        "constraint tree of height {} exceeds class height {}",
                        f.height(),
                        self.height
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Constraints restricted to depth `d` of `t`, which must have height ≥ `d`.
    fn layer_ok(&self, t: &FiniteTree, d: usize) -> bool {
        let nodes = || t.nodes_at(d);
        self.constraints.iter().all(|c| match c {
            Constraint::Extends(f) => d > f.height() || f.nodes_at(d).is_subset(&nodes()),
            Constraint::Prefix(f) => d > f.height() || f.nodes_at(d) == nodes(),
            Constraint::PathsInside(q) => d > q.height() || nodes().is_subset(&q.nodes_at(d)),
            Constraint::ScheduleBranching(s) => match s.level_of_depth(d) {
                Some(k) if k > 0 => {
                    let lo = s.value(k - 1);
                    t.nodes_at(lo).iter().all(|v| {
                        let below = nodes().iter().filter(|w| v.is_prefix_of(w)).count();
                        below <= 2
                    })
                }
                _ => true,
            },
            Constraint::Skeletal => true,
        })
    }

    fn skeletal_ok(&self, t: &FiniteTree) -> bool {
        !self.constraints.contains(&Constraint::Skeletal) || two_child_nodes_form_chain(t)
    }

    pub fn contains(&self, t: &FiniteTree) -> bool {
        t.height() == self.height
            && (0..=self.height).all(|d| self.layer_ok(t, d))
            && self.skeletal_ok(t)
    }
}

/// All members of `class`, each once, in canonical tree order.
///
/// Grows candidates one depth at a time, each node keeping its left child, its
/// right child, or both, and drops a candidate as soon as the new layer breaks
/// a constraint. Fails with [`Error::CapExceeded`] once more than `cap`
/// candidates are live at one depth.
pub fn enumerate_class(class: &TreeClass, cap: usize) -> Result<Vec<FiniteTree>> {
    class.validate()?;
    let root = FiniteTree::root_only();
    let mut frontier = Vec::new();
    if class.layer_ok(&root, 0) {
        frontier.push(root);
    }
    for d in 1..=class.height {
        let mut next = Vec::new();
        for t in &frontier {
            let leaves: Vec<&BitString> = t.leaves().iter().collect();
            grow(&leaves, 0, &mut Vec::new(), &mut |children| {
                let child = FiniteTree::new(d, children.iter().cloned().collect())
                    .expect("every grown leaf has depth d");
                if class.layer_ok(&child, d) && class.skeletal_ok(&child) {
                    if next.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    next.push(child);
                }
                Ok(())
            })?;
        }
        frontier = next;
    }
    frontier.retain(|t| class.skeletal_ok(t));
    frontier.sort();
    Ok(frontier)
}

fn grow(
    leaves: &[&BitString],
    i: usize,
    acc: &mut Vec<BitString>,
    emit: &mut dyn FnMut(&[BitString]) -> Result<()>,
) -> Result<()> {
    if i == leaves.len() {
        return emit(acc);
    }
    let mark = acc.len();
    for choice in [&[false][..], &[true], &[false, true]] {
        acc.extend(choice.iter().map(|&b| leaves[i].child(b)));
        grow(leaves, i + 1, acc, emit)?;
        acc.truncate(mark);
    }
    Ok(())
}

/// Every nonempty leaf set of height `h`, unfiltered. Needs `2^h < 64`.
pub fn all_leaf_sets(h: usize) -> impl Iterator<Item = FiniteTree> {
    let words: Vec<BitString> = BitString::all_of_length(h).collect();
    let n = words.len();
    assert!(n < 64, "height {h} is too large for leaf-set enumeration");
    (1u64..(1u64 << n)).map(move |mask| {
        let leaves: StringSet = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| words[i].clone())
            .collect();
        FiniteTree::new(h, leaves).expect("nonempty")
    })
}
