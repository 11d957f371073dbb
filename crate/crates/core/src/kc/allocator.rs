use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::stringset::StringSet;

/// Ask for a codeword of length `code_length` describing `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KcRequest {
    pub target: BitString,
    pub code_length: usize,
}

impl KcRequest {
    pub fn new(target: BitString, code_length: usize) -> Self {
        KcRequest {
            target,
            code_length,
        }
    }

    pub fn weight(&self) -> Dyadic {
        Dyadic::cylinder(self.code_length)
    }
}

/// First-fit leftmost Kraft–Chaitin allocator.
///
/// Free space is a list of dyadic intervals of `[0,1)`, each named by the
/// word whose cylinder it is, ordered left to right. Their sizes are distinct
/// and strictly increase left to right, so the free weight is a sum of
/// distinct powers of two and a request fails only when it outweighs all free
/// space together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KcAllocator {
    free: Vec<BitString>,
    assignments: Vec<(BitString, BitString)>,
}

impl Default for KcAllocator {
    fn default() -> Self {
        KcAllocator {
            free: vec![BitString::empty()],
            assignments: Vec::new(),
        }
    }
}

impl KcAllocator {
    pub fn new() -> Self {
        KcAllocator::default()
    }

    /// Free intervals, left to right.
    pub fn free(&self) -> &[BitString] {
        &self.free
    }

    /// `(target, codeword)` pairs in allocation order.
    pub fn assignments(&self) -> &[(BitString, BitString)] {
        &self.assignments
    }

    pub fn codewords(&self) -> StringSet {
        self.assignments.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn free_weight(&self) -> Dyadic {
        self.free.iter().map(|w| Dyadic::cylinder(w.len())).sum()
    }

    pub fn assigned_weight(&self) -> Dyadic {
        self.assignments
            .iter()
            .map(|(_, c)| Dyadic::cylinder(c.len()))
            .sum()
    }

    /// Length of the shortest codeword describing `target`, if any.
    pub fn code_length(&self, target: &BitString) -> Option<usize> {
        self.assignments
            .iter()
            .filter(|(t, _)| t == target)
            .map(|(_, c)| c.len())
            .min()
    }

    /// Shortest code length per target.
    pub fn code_lengths(&self) -> BTreeMap<BitString, usize> {
        let mut out = BTreeMap::new();
        for (t, c) in &self.assignments {
            let e = out.entry(t.clone()).or_insert(c.len());
            *e = (*e).min(c.len());
        }
        out
    }

    /// Runs the machine: the target whose codeword is exactly `input`.
    pub fn decode(&self, input: &BitString) -> Option<&BitString> {
        self.assignments
            .iter()
            .find(|(_, c)| c == input)
            .map(|(t, _)| t)
    }

    /// Places `r` at the leftmost free interval large enough for it.
    pub fn allocate(&self, r: &KcRequest) -> Result<(KcAllocator, BitString)> {
        let l = r.code_length;
        let Some(i) = self.free.iter().position(|w| w.len() <= l) else {
            let available = self.free_weight();
            let requested = r.weight();
            let deficit = requested
                .checked_sub(&available)
                .expect("no fitting interval means the request outweighs free space");
            return Err(Error::Allocation {
                requested,
                available,
                deficit,
            });
        };
        let w = &self.free[i];
        let code = w.concat(&BitString::from_bits(vec![false; l - w.len()]));
        // the split leaves w0…01, w0…1, …, w1: left to right, growing
        let rest = (w.len() + 1..=l).rev().map(|j| {
            let mut s = code.prefix(j - 1);
            s.push(true);
            s
        });
        let mut free = Vec::with_capacity(self.free.len() + l - w.len());
        free.extend_from_slice(&self.free[..i]);
        free.extend(rest);
        free.extend_from_slice(&self.free[i + 1..]);
        let mut assignments = self.assignments.clone();
        assignments.push((r.target.clone(), code.clone()));
        Ok((KcAllocator { free, assignments }, code))
    }

    /// In-place form of [`KcAllocator::allocate`]; leaves `self` untouched on error.
    pub fn push(&mut self, r: &KcRequest) -> Result<BitString> {
        let (next, code) = self.allocate(r)?;
        *self = next;
        Ok(code)
    }
}

/// Allocates `requests` in order on a fresh allocator.
pub fn replay<'a>(requests: impl IntoIterator<Item = &'a KcRequest>) -> Result<KcAllocator> {
    let mut a = KcAllocator::new();
    for r in requests {
        a.push(r)?;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn req(l: usize) -> KcRequest {
        KcRequest::new(BitString::empty(), l)
    }

    fn codes(lengths: &[usize]) -> Result<Vec<BitString>> {
        let mut a = KcAllocator::new();
        lengths.iter().map(|&l| a.push(&req(l))).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            codes(&[1, 2, 2]).unwrap(),
            vec![bs("0"), bs("10"), bs("11")]
        );
        assert_eq!(codes(&[2, 1]).unwrap(), vec![bs("00"), bs("1")]);
        let err = codes(&[1, 1, 2]).unwrap_err();
        assert_eq!(
            err,
            Error::Allocation {
                requested: "1/4".parse().unwrap(),
                available: Dyadic::zero(),
                deficit: "1/4".parse().unwrap(),
            }
        );
    }

    #[test]
    fn allocate_is_pure() {
        let a = KcAllocator::new();
        let (b, c) = a.allocate(&req(3)).unwrap();
        assert_eq!(a, KcAllocator::new());
        assert_eq!(c, bs("000"));
        assert_eq!(b.free(), &[bs("001"), bs("01"), bs("1")]);
        assert_eq!(b.decode(&bs("000")), Some(&BitString::empty()));
    }

    #[test]
    fn deficit_is_exact() {
        let mut a = KcAllocator::new();
        a.push(&req(1)).unwrap();
        a.push(&req(2)).unwrap();
        let before = a.clone();
        let err = a.push(&req(1)).unwrap_err();
        assert_eq!(a, before);
        match err {
            Error::Allocation {
                requested,
                available,
                deficit,
            } => {
                assert_eq!(requested, "1/2".parse().unwrap());
                assert_eq!(available, "1/4".parse().unwrap());
                assert_eq!(deficit, "1/4".parse().unwrap());
            }
            e => panic!("{e:?}"),
        }
    }

    /// Feasibility of placing codewords of the given lengths one after
    /// another, by search over occupied leaf cells at depth `depth`.
    fn brute_force_feasible(lengths: &[usize], depth: usize) -> bool {
        fn go(
            lengths: &[usize],
            depth: usize,
            used: u64,
            dead: &mut HashSet<(usize, u64)>,
        ) -> bool {
            let Some((&l, rest)) = lengths.split_first() else {
                return true;
            };
            if dead.contains(&(rest.len(), used)) {
                return false;
            }
            let span = 1u64 << (depth - l);
            let block = if span == 64 {
                u64::MAX
            } else {
                (1u64 << span) - 1
            };
            for s in 0..(1u64 << l) {
                let cells = block << (s * span);
                if used & cells == 0 && go(rest, depth, used | cells, dead) {
                    return true;
                }
            }
            dead.insert((rest.len(), used));
            false
        }
        assert!(depth <= 6);
        go(lengths, depth, 0, &mut HashSet::new())
    }

    proptest! {
        #[test]
        fn conservation_and_prefix_freeness(lengths in prop::collection::vec(0usize..8, 0..50)) {
            let mut a = KcAllocator::new();
            for l in lengths {
                let _ = a.push(&req(l));
                prop_assert_eq!(&a.assigned_weight() + &a.free_weight(), Dyadic::one());
                prop_assert!(a.codewords().is_prefix_free());
                prop_assert_eq!(a.codewords().len(), a.assignments().len());
                let mut all = a.codewords();
                all.extend(a.free().iter().cloned());
                prop_assert!(all.is_prefix_free());
                prop_assert!(a.free().windows(2).all(|w| w[0].len() > w[1].len() && w[0].bits() < w[1].bits()));
            }
        }

        #[test]
        fn errors_exactly_when_infeasible(lengths in prop::collection::vec(0usize..=5, 0..=12)) {
            let mut a = KcAllocator::new();
            for (i, &l) in lengths.iter().enumerate() {
                let ok = a.push(&req(l)).is_ok();
                prop_assert_eq!(ok, brute_force_feasible(&lengths[..=i], 5));
                if !ok {
                    break;
                }
            }
        }
    }
}
