//! Uniform measure of open sets `⟨V⟩` in Cantor space.

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::scalar::MeasureScalar;
use crate::stringset::StringSet;

/// `μ(⟨V⟩)` in any scalar type. Overlapping cylinders are counted once.
pub fn measure_in<S: MeasureScalar>(v: &StringSet) -> S {
    v.minimal()
        .iter()
        .fold(S::zero(), |acc, s| acc + S::cylinder(s.len()))
}

/// `μ(⟨V⟩)`, exact.
pub fn measure(v: &StringSet) -> Dyadic {
    measure_in(v)
}

/// `Σ_{σ∈V} 2^{-|σ|}`, the Kraft sum. Equals [`measure`] when `V` is prefix-free.
pub fn weight(v: &StringSet) -> Dyadic {
    v.iter().map(|s| Dyadic::cylinder(s.len())).sum()
}

/// `μ_σ(V) = 2^{|σ|}·μ(⟨V⟩∩⟨σ⟩)` in any scalar type.
pub fn relative_measure_in<S: MeasureScalar>(sigma: &BitString, v: &StringSet) -> S {
    if v.covers(sigma) {
        return S::one();
    }
    measure_in::<S>(&v.tails_under(sigma))
}

/// `μ_σ(V)`, exact.
pub fn relative_measure(sigma: &BitString, v: &StringSet) -> Dyadic {
    relative_measure_in(sigma, v)
}

/// `μ(⟨A⟩∩⟨B⟩)`.
pub fn measure_of_intersection(a: &StringSet, b: &StringSet) -> Dyadic {
    measure(&a.intersect(b))
}

/// `μ((⟨A⟩ − ⟨B⟩) ∩ ⟨C⟩)`.
pub fn measure_of_difference_within(a: &StringSet, b: &StringSet, c: &StringSet) -> Dyadic {
    let ac = a.intersect(c);
    let abc = ac.intersect(b);
    measure(&ac)
        .checked_sub(&measure(&abc))
        .expect("a subset never outweighs its superset")
}

/// `V^k` with `V^1 = V`, `V^{j+1} = V^j ∗ V`. Requires `V` prefix-free and `k ≥ 1`.
pub fn concat_power(v: &StringSet, k: usize) -> Result<StringSet> {
    if k == 0 {
        return Err(Error::pre("concat_power needs k >= 1"));
    }
    if !v.is_prefix_free() {
        return Err(Error::pre(format!(
            "concat_power needs a prefix-free set, got {v}"
        )));
    }
    let mut out = v.clone();
    for _ in 1..k {
        out = out.concat(v);
    }
    Ok(out)
}
