use serde::Serialize;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::measure::relative_measure;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoostResult {
    pub k: u32,
    /// Depth truncation of the complement of `⟨V0^k⟩`.
    pub tree: FiniteTree,
}

/// Least `k` with `(1−δ)^k < ε`, for `0 < δ < 1` and `0 < ε < 1`.
pub fn least_power_below(delta: &Dyadic, eps: &Dyadic) -> Result<u32> {
    let base = delta
        .complement()
        .filter(|b| !b.is_zero() && !b.is_one())
        .ok_or_else(|| Error::pre(format!("δ = {delta} must lie strictly between 0 and 1")))?;
    if eps.is_zero() || *eps >= Dyadic::one() {
        return Err(Error::pre(format!(
            "ε = {eps} must lie strictly between 0 and 1"
        )));
    }
    let mut k = 0;
    let mut p = Dyadic::one();
    while p >= *eps {
        p = &p * &base;
        k += 1;
    }
    Ok(k)
}

/// Strings of length `depth` not covered by `⟨V0^k⟩`, found by parsing each
/// candidate into successive `V0` blocks (unique since `V0` is prefix-free).
fn uncovered_by_power(v0: &StringSet, k: u32, depth: usize) -> StringSet {
    fn walk(
        v0: &StringSet,
        k: u32,
        depth: usize,
        node: &mut BitString,
        start: usize,
        done: u32,
        out: &mut StringSet,
    ) {
        let block = node.tail(start);
        let (start, done) = if v0.contains(&block) {
            (node.len(), done + 1)
        } else {
            (start, done)
        };
        if done == k {
            return;
        }
        if node.len() == depth {
            out.insert(node.clone());
            return;
        }
        let block = node.tail(start);
        let can_grow = v0.iter().any(|v| block.is_prefix_of(v));
        if !can_grow {
            // no block can complete here, so every extension survives
            let rest = depth - node.len();
            for w in BitString::all_of_length(rest) {
                out.insert(node.concat(&w));
            }
            return;
        }
        for b in [false, true] {
            node.push(b);
            walk(v0, k, depth, node, start, done, out);
            node.pop();
        }
    }
    let mut out = StringSet::new();
    walk(v0, k, depth, &mut BitString::empty(), 0, 0, &mut out);
    out
}

/// Density boost: with `μ_τ(V0) < 1−δ` along `z`, `V = V0^k` for the least `k`
/// with `(1−δ)^k < ε` leaves the complement of `⟨V⟩` with relative measure
/// above `1−ε` at every `τ ⪯ z`.
pub fn boost_density(
    v0: &StringSet,
    z: &BitString,
    delta: &Dyadic,
    eps: &Dyadic,
    depth: usize,
) -> Result<BoostResult> {
    if !v0.is_prefix_free() {
        return Err(Error::pre(format!("V0 = {v0} is not prefix-free")));
    }
    if z.len() > depth {
        return Err(Error::pre(format!(
            "prefix length {} exceeds depth {depth}",
            z.len()
        )));
    }
    if depth >= 32 {
        return Err(Error::pre(format!(
            "depth {depth} is too large to materialize"
        )));
    }
    let k = least_power_below(delta, eps)?;
    let limit = delta.complement().expect("checked in least_power_below");
    for tau in z.prefixes() {
        let m = relative_measure(&tau, v0);
        if m >= limit {
            return Err(Error::pre(format!(
                "μ_τ(V0) = {m} is not below 1−δ = {limit} at τ = {tau}"
            )));
        }
    }
    let leaves = uncovered_by_power(v0, k, depth);
    let tree =
        FiniteTree::new(depth, leaves).expect("the root keeps relative measure above 1−ε > 0");
    Ok(BoostResult { k, tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use crate::measure::concat_power;
    use crate::stringset::set;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let r = boost_density(&set(&["1"]), &bs("0000"), &d("1/4"), &d("1/2"), 4).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(concat_power(&set(&["1"]), 3).unwrap(), set(&["111"]));
        assert_eq!(
            relative_measure(&BitString::empty(), r.tree.leaves()),
            d("7/8")
        );
        assert!(boost_density(&set(&["1"]), &bs("0"), &d("1/4"), &d("1"), 4).is_err());
        let r = boost_density(&StringSet::new(), &bs("01"), &d("1/2"), &d("1/8"), 3).unwrap();
        assert_eq!(r.k, 4);
        assert_eq!(r.tree, FiniteTree::full(3));
    }

    #[test]
    fn hypothesis_is_checked() {
        let err = boost_density(&set(&["00"]), &bs("00"), &d("1/4"), &d("1/2"), 3).unwrap_err();
        assert!(err.to_string().contains("τ = 00"), "{err}");
        assert!(boost_density(&set(&["0", "01"]), &bs(""), &d("1/4"), &d("1/2"), 3).is_err());
    }

    #[test]
    fn least_power() {
        assert_eq!(least_power_below(&d("1/4"), &d("1/2")).unwrap(), 3);
        assert_eq!(least_power_below(&d("1/2"), &d("1/2")).unwrap(), 2);
        assert_eq!(least_power_below(&d("1/2"), &d("3/4")).unwrap(), 1);
        assert!(least_power_below(&d("0"), &d("1/2")).is_err());
        assert!(least_power_below(&d("1"), &d("1/2")).is_err());
        assert!(least_power_below(&d("1/2"), &d("0")).is_err());
    }

    fn avoids_11(x: &BitString) -> bool {
        !x.bits().windows(2).any(|w| w[0] && w[1])
    }

    /// Prefix-free sets covering every 11-free string of length 3: maximal
    /// antichains cut from the 11-free words of length ≤ 3.
    fn covering_v0s() -> Vec<StringSet> {
        let words: Vec<BitString> = (1..=3)
            .flat_map(BitString::all_of_length)
            .filter(avoids_11)
            .collect();
        let targets: Vec<BitString> = BitString::all_of_length(3).filter(avoids_11).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << words.len()) {
            let v: StringSet = (0..words.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| words[i].clone())
                .collect();
            if v.is_prefix_free() && targets.iter().all(|t| v.covers(t)) {
                out.push(v);
            }
        }
        out
    }

    /// Covering all 11-free strings survives concatenation powers, since a
    /// tail of an 11-free string is 11-free.
    #[test]
    fn powers_keep_covering_a_tail_closed_property() {
        let v0s = covering_v0s();
        assert!(v0s.len() > 3);
        for v0 in v0s {
            for k in 1..=4usize {
                let vk = concat_power(&v0, k).unwrap();
                for x in BitString::all_of_length(3 * k).filter(avoids_11) {
                    assert!(vk.covers(&x), "{v0} ^ {k} misses {x}");
                }
            }
        }
    }

    fn arb_prefix_free(max_len: usize) -> impl Strategy<Value = StringSet> {
        prop::collection::vec(
            prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(BitString::from_bits),
            0..5,
        )
        .prop_map(|v| {
            let s: StringSet = v.into_iter().collect();
            s.iter()
                .filter(|a| !s.iter().any(|b| b.is_proper_prefix_of(a)))
                .cloned()
                .collect()
        })
    }

    /// The bound `μ_τ(V0^k) ≤ μ_τ(V0)^k` fails off the root.
    #[test]
    fn per_node_power_bound_counterexample() {
        let v0 = set(&["00", "1"]);
        let v2 = concat_power(&v0, 2).unwrap();
        assert_eq!(relative_measure(&bs("0"), &v0), d("1/2"));
        assert_eq!(relative_measure(&bs("0"), &v2), d("3/8"));
        assert!(relative_measure(&bs("0"), &v2) > d("1/4"));
    }

    proptest! {
        /// Outside `⟨V0⟩` the first block ends below `τ` and the rest starts
        /// afresh: `μ_τ(V0^k) = μ_τ(V0)·μ(V0)^{k−1}`.
        #[test]
        fn power_relative_measure_factorizes(
            v0 in arb_prefix_free(4),
            tau in prop::collection::vec(any::<bool>(), 0..4).prop_map(BitString::from_bits),
            k in 1usize..4,
        ) {
            prop_assume!(!v0.covers(&tau));
            let vk = concat_power(&v0, k).unwrap();
            let root = relative_measure(&BitString::empty(), &v0);
            let expected = &relative_measure(&tau, &v0) * &root.pow(k as u32 - 1);
            prop_assert_eq!(relative_measure(&tau, &vk), expected);
        }

        #[test]
        fn parsed_complement_matches_materialized_power(v0 in arb_prefix_free(3), k in 1u32..4) {
            let vk = concat_power(&v0, k as usize).unwrap();
            let direct: StringSet = BitString::all_of_length(7).filter(|x| !vk.covers(x)).collect();
            prop_assert_eq!(uncovered_by_power(&v0, k, 7), direct);
        }
    }
}
