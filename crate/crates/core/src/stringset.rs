use serde::{Deserialize, Serialize};
use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bitstring::BitString;
use crate::error::Error;

/// A finite set of binary words, iterated in length-then-lex order.
///
/// Members may be prefix-comparable; [`StringSet::is_prefix_free`] tests the
/// stronger property and [`StringSet::minimal`] produces the prefix-free
/// generator of the same open set `⟨V⟩`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StringSet {
    members: BTreeSet<BitString>,
}

impl StringSet {
    pub fn new() -> Self {
        StringSet::default()
    }

    pub fn singleton(s: BitString) -> Self {
        let mut v = StringSet::new();
        v.insert(s);
        v
    }

    /// The whole level `2^n`. Requires `n < 64`.
    pub fn level(n: usize) -> Self {
        BitString::all_of_length(n).collect()
    }

    pub fn insert(&mut self, s: BitString) -> bool {
        self.members.insert(s)
    }

    pub fn remove(&mut self, s: &BitString) -> bool {
        self.members.remove(s)
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, BitString> {
        self.members.iter()
    }

    pub fn range<R: std::ops::RangeBounds<BitString>>(
        &self,
        r: R,
    ) -> btree_set::Range<'_, BitString> {
        self.members.range(r)
    }

    pub fn first(&self) -> Option<&BitString> {
        self.members.first()
    }

    pub fn max_len(&self) -> usize {
        self.members.last().map_or(0, BitString::len)
    }

    pub fn is_subset(&self, other: &StringSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// True if every member has length `n`.
    pub fn all_of_length(&self, n: usize) -> bool {
        self.members.iter().all(|s| s.len() == n)
    }

    /// Does some member prefix `x`? Equivalently, `x`'s cylinder lies inside `⟨V⟩`.
    pub fn covers(&self, x: &BitString) -> bool {
        (0..=x.len()).any(|n| self.members.contains(&x.prefix(n)))
    }

    /// No member is a proper prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        self.members
            .iter()
            .all(|s| (0..s.len()).all(|n| !self.members.contains(&s.prefix(n))))
    }

    /// The prefix-free set generating the same open set.
    pub fn minimal(&self) -> StringSet {
        let mut out = StringSet::new();
        // Shorter words come first, so any covering prefix is already in `out`.
        for s in &self.members {
            if !out.covers(s) {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        self.members.union(&other.members).cloned().collect()
    }

    /// Generator of `⟨self⟩ ∩ ⟨other⟩`: of each comparable pair keep the longer word.
    pub fn intersect(&self, other: &StringSet) -> StringSet {
        let mut out = StringSet::new();
        for a in &self.members {
            for b in &other.members {
                if a.is_prefix_of(b) {
                    out.insert(b.clone());
                } else if b.is_prefix_of(a) {
                    out.insert(a.clone());
                }
            }
        }
        out.minimal()
    }

    /// `V ∗ U = { σ∗τ : σ ∈ V, τ ∈ U }`.
    pub fn concat(&self, other: &StringSet) -> StringSet {
        let mut out = StringSet::new();
        for a in &self.members {
            for b in &other.members {
                out.insert(a.concat(b));
            }
        }
        out
    }

    /// Members extending `sigma`, with `sigma` stripped off.
    pub fn tails_under(&self, sigma: &BitString) -> StringSet {
        self.members
            .iter()
            .filter(|s| sigma.is_prefix_of(s))
            .map(|s| s.tail(sigma.len()))
            .collect()
    }

    /// Members that extend `sigma` (including `sigma` itself).
    pub fn below(&self, sigma: &BitString) -> StringSet {
        self.members
            .iter()
            .filter(|s| sigma.is_prefix_of(s))
            .cloned()
            .collect()
    }

    pub fn into_vec(self) -> Vec<BitString> {
        self.members.into_iter().collect()
    }
}

impl FromIterator<BitString> for StringSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        StringSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl Extend<BitString> for StringSet {
    fn extend<I: IntoIterator<Item = BitString>>(&mut self, iter: I) {
        self.members.extend(iter)
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = btree_set::Iter<'a, BitString>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl IntoIterator for StringSet {
    type Item = BitString;
    type IntoIter = btree_set::IntoIter<BitString>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl fmt::Display for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Comma-separated words, optionally braced: `{0,10}` or `0,10`. `{}` is empty.
impl FromStr for StringSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        if inner.is_empty() {
            return Ok(StringSet::new());
        }
        inner.split(',').map(BitString::from_str).collect()
    }
}

/// Shorthand for tests: `set(&["0", "10"])`.
pub fn set(words: &[&str]) -> StringSet {
    words.iter().map(|w| crate::bitstring::bs(w)).collect()
}
