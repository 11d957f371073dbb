//! Densification `T_ℓ → T_m`: the nested family `H_σ`, the truth-table map
//! `Φ(T;n) = {σ ∈ 2^{m_n} : T ∩ H_σ ≠ ∅}`, deficiency transfer through a
//! Kraft-Chaitin machine, Monte Carlo checks of the branching bounds, and the
//! derived tree `T_z`.

mod derived;
mod mc;
mod transfer;

pub use derived::{decode, derived_tree};
pub use mc::{mc_experiment, McReport, McRow, CHUNK};
pub use transfer::{certify, transfer_requests, transfer_weight};

use serde::Serialize;
use std::collections::BTreeMap;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::schedule::LevelSchedule;
use crate::stringset::StringSet;
use crate::tree::FiniteTree;
use crate::treespace::LevelTree;

/// Checks `m_{k+1} − m_k ≤ ℓ_{k+1} − ℓ_k` for `k < n`.
pub fn check_dominance(l: &LevelSchedule, m: &LevelSchedule, n: usize) -> Result<()> {
    for (name, s) in [("ℓ", l), ("m", m)] {
        if !s.is_defined(n) {
            return Err(Error::pre(format!(
                "schedule {name} = {s} has no level {n}"
            )));
        }
    }
    if let Some(k) = (0..n).find(|&k| m.gap(k) > l.gap(k)) {
        return Err(Error::pre(format!(
            "gap dominance fails at level {k}: m gap {} exceeds ℓ gap {}",
            m.gap(k),
            l.gap(k)
        )));
    }
    Ok(())
}

/// The `σ` with `τ ∈ H_σ`: the bit windows `[ℓ_k, ℓ_k + m_{k+1} − m_k)` of `τ`
/// for `k < n`, concatenated, where `|τ| = ℓ_n`.
pub fn extract_with(l: &LevelSchedule, m: &LevelSchedule, tau: &BitString) -> Result<BitString> {
    let n = l
        .level_of_depth(tau.len())
        .ok_or_else(|| Error::pre(format!("|τ| = {} is not a depth of {l}", tau.len())))?;
    check_dominance(l, m, n)?;
    let mut bits = Vec::with_capacity(m.value(n));
    for k in 0..n {
        let start = l.value(k);
        bits.extend_from_slice(&tau.bits()[start..start + m.gap(k)]);
    }
    Ok(BitString::from_bits(bits))
}

/// The family `(H_σ)` for `|σ| = m_k`, `k ≤ level`, materialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingFamily {
    l: LevelSchedule,
    m: LevelSchedule,
    level: usize,
    sets: BTreeMap<BitString, StringSet>,
}

/// `H_λ = {λ}` and `H_{σ∗ρ} = ⋃_{τ∈H_σ} {τ' ∈ 2^{ℓ_{k+1}} : τ∗ρ ≺ τ'}`.
pub fn family_build(l: &LevelSchedule, m: &LevelSchedule, n: usize) -> Result<HittingFamily> {
    check_dominance(l, m, n)?;
    let mut sets = BTreeMap::from([(BitString::empty(), StringSet::singleton(BitString::empty()))]);
    let mut frontier = vec![BitString::empty()];
    for k in 0..n {
        let rhos: Vec<BitString> = BitString::all_of_length(m.gap(k)).collect();
        let pads: Vec<BitString> = BitString::all_of_length(l.gap(k) - m.gap(k)).collect();
        let mut next = Vec::with_capacity(frontier.len() * rhos.len());
        for sigma in &frontier {
            let parent = &sets[sigma];
            for rho in &rhos {
                let child: StringSet = parent
                    .iter()
                    .flat_map(|t| {
                        let stem = t.concat(rho);
                        pads.iter().map(move |p| stem.concat(p))
                    })
                    .collect();
                next.push((sigma.concat(rho), child));
            }
        }
        frontier = next.iter().map(|(s, _)| s.clone()).collect();
        sets.extend(next);
    }
    Ok(HittingFamily {
        l: l.clone(),
        m: m.clone(),
        level: n,
        sets,
    })
}

impl HittingFamily {
    pub fn l(&self) -> &LevelSchedule {
        &self.l
    }

    pub fn m(&self) -> &LevelSchedule {
        &self.m
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `H_σ`, when `|σ| = m_k` for some `k ≤ level`.
    pub fn set(&self, sigma: &BitString) -> Option<&StringSet> {
        self.sets.get(sigma)
    }

    /// Indices `σ ∈ 2^{m_k}` in lexicographic order.
    pub fn indices(&self, k: usize) -> impl Iterator<Item = &BitString> + '_ {
        let len = self.m.value(k);
        self.sets.keys().filter(move |s| s.len() == len)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &StringSet)> + '_ {
        self.sets.iter()
    }

    pub fn extract(&self, tau: &BitString) -> Result<BitString> {
        match self.l.level_of_depth(tau.len()) {
            Some(k) if k <= self.level => extract_with(&self.l, &self.m, tau),
            _ => Err(Error::pre(format!(
                "|τ| = {} is not an ℓ-depth up to level {}",
                tau.len(),
                self.level
            ))),
        }
    }
}

/// `Φ(T)` stored m-aligned. Level slices may have more than two extensions,
/// so membership in `T_m` is reported rather than assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiImage {
    pub schedule: LevelSchedule,
    pub level: usize,
    /// `Φ(T;k)` for `k ≤ level`.
    pub slices: Vec<StringSet>,
}

impl PhiImage {
    /// The tree generated by the top slice.
    pub fn tree(&self) -> FiniteTree {
        FiniteTree::new(
            self.schedule.value(self.level),
            self.slices[self.level].clone(),
        )
        .expect("the top slice is nonempty")
    }

    /// Extensions in slice `k+1` of `σ` in slice `k`.
    pub fn extensions(&self, k: usize, sigma: &BitString) -> usize {
        let pad = self.schedule.value(k + 1) - sigma.len();
        let lo = sigma.concat(&BitString::from_bits(vec![false; pad]));
        let hi = sigma.concat(&BitString::from_bits(vec![true; pad]));
        self.slices[k + 1].range(lo..=hi).count()
    }

    /// Nodes in slice `k < level` with more than two extensions, with counts.
    pub fn over_two(&self) -> Vec<(usize, BitString, usize)> {
        self.count_where(|e| e > 2)
    }

    /// Nodes in slice `k < level` with exactly one extension.
    pub fn defects(&self) -> Vec<(usize, BitString, usize)> {
        self.count_where(|e| e == 1)
    }

    fn count_where(&self, keep: impl Fn(usize) -> bool) -> Vec<(usize, BitString, usize)> {
        let mut out = Vec::new();
        for k in 0..self.level {
            for s in &self.slices[k] {
                let e = self.extensions(k, s);
                if keep(e) {
                    out.push((k, s.clone(), e));
                }
            }
        }
        out
    }

    /// Every slice element restricts into the previous slice and extends into
    /// the next.
    pub fn is_pruned(&self) -> bool {
        (1..=self.level).all(|k| {
            let prev = self.schedule.value(k - 1);
            self.slices[k]
                .iter()
                .all(|s| self.slices[k - 1].contains(&s.prefix(prev)))
                && self.slices[k - 1]
                    .iter()
                    .all(|s| self.extensions(k - 1, s) >= 1)
        })
    }

    /// One or two extensions everywhere, i.e. a prefix of a tree in `T_m`.
    pub fn in_t_m(&self) -> bool {
        self.is_pruned() && self.over_two().is_empty()
    }
}

fn check_alignment(t: &LevelTree, fam: &HittingFamily) -> Result<()> {
    if t.schedule() != fam.l() {
        return Err(Error::pre(format!(
            "tree schedule {} differs from the family's ℓ = {}",
            t.schedule(),
            fam.l()
        )));
    }
    if t.level() > fam.level() {
        return Err(Error::pre(format!(
            "tree level {} exceeds the family level {}",
            t.level(),
            fam.level()
        )));
    }
    Ok(())
}

/// `Φ(T;k) = {σ ∈ 2^{m_k} : T ∩ H_σ ≠ ∅}` for `k ≤ T.level`, read off the family.
pub fn phi(t: &LevelTree, fam: &HittingFamily) -> Result<PhiImage> {
    check_alignment(t, fam)?;
    let slices = (0..=t.level())
        .map(|k| {
            let nodes = t.slice(k);
            fam.indices(k)
                .filter(|sigma| nodes.iter().any(|tau| fam.sets[*sigma].contains(tau)))
                .cloned()
                .collect()
        })
        .collect();
    Ok(PhiImage {
        schedule: fam.m().clone(),
        level: t.level(),
        slices,
    })
}

/// [`phi`] computed by extracting windows from the nodes of `T`; needs no
/// materialized family.
pub fn phi_via_extract(t: &LevelTree, m: &LevelSchedule) -> Result<PhiImage> {
    check_dominance(t.schedule(), m, t.level())?;
    let slices = (0..=t.level())
        .map(|k| {
            t.slice(k)
                .iter()
                .map(|tau| extract_with(t.schedule(), m, tau))
                .collect::<Result<StringSet>>()
        })
        .collect::<Result<_>>()?;
    Ok(PhiImage {
        schedule: m.clone(),
        level: t.level(),
        slices,
    })
}
