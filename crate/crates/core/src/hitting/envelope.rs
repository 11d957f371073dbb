use serde::Serialize;
use std::collections::BTreeMap;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::hitting::hits;
use crate::measure::{measure_of_difference_within, measure_of_intersection};
use crate::schedule::{series_partial, LevelSchedule, Verdict};
use crate::stringset::StringSet;
use crate::tree::FiniteTree;
use crate::treespace::TreeClass;

/// A finite family `(H_σ)_{|σ| ≤ length}` with per-length schedule levels.
#[derive(Clone, Debug)]
pub struct EnvelopeFamily {
    pub r: i64,
    pub length: usize,
    pub schedule: LevelSchedule,
    /// Schedule index of `l_σ` for each `|σ| = 0..=length`.
    pub levels: Vec<usize>,
    pub sets: BTreeMap<BitString, StringSet>,
    /// Number of schedule terms summed before a tail bound takes over.
    pub horizon: usize,
}

/// Schedule index of `l_σ` for `|σ| = 0..=length`: the first level at depth
/// `≥ max(height, f(k))` strictly after the level chosen for `k − 1`.
pub fn envelope_levels(
    schedule: &LevelSchedule,
    height: usize,
    f: impl Fn(usize) -> usize,
    length: usize,
) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::with_capacity(length + 1);
    for k in 0..=length {
        let floor = height.max(f(k));
        let after = out.last().map_or(0, |&i| i + 1);
        let i = (after..)
            .map_while(|i| schedule.try_value(i).map(|v| (i, v)))
            .find(|&(_, v)| v >= floor)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::pre(format!("schedule {schedule} runs out before length {k}")))?;
        out.push(i);
    }
    Ok(out)
}

impl EnvelopeFamily {
    pub fn new(
        r: i64,
        schedule: LevelSchedule,
        levels: Vec<usize>,
        sets: BTreeMap<BitString, StringSet>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::pre("an envelope needs at least the level of λ"));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::pre(
                "envelope levels must strictly increase with |σ|",
            ));
        }
        let length = levels.len() - 1;
        if let Some(s) = sets.keys().find(|s| s.len() > length) {
            return Err(Error::pre(format!(
                "index {s} is longer than the envelope length {length}"
            )));
        }
        let horizon = levels[length] + 64;
        Ok(EnvelopeFamily {
            r,
            length,
            schedule,
            levels,
            sets,
            horizon,
        })
    }

    /// `H_σ`; absent indices are empty.
    pub fn set(&self, sigma: &BitString) -> StringSet {
        self.sets.get(sigma).cloned().unwrap_or_default()
    }

    /// `l_σ` as a depth.
    pub fn depth(&self, sigma: &BitString) -> usize {
        self.schedule.value(self.levels[sigma.len()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `μ(⟨H_σ⟩∩Q) ≤ 2^{r−|σ|} + Σ_{l_σ ≤ l_i} 2^{l_i−l_{i+1}}`
    MeasureBound,
    /// `H_σ` hits the class supplied for `σ`
    Hits,
    /// `H_σ ⊆ 2^{l_σ}`
    AtLevel,
    /// `μ((⟨H_σ⟩−⟨H_{σ0}⟩−⟨H_{σ1}⟩)∩Q) ≤ Σ_{l_σ ≤ l_i < l_{σ0}} 2^{l_i−l_{i+1}}`
    Telescoping,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Pass,
    Fail,
    /// The truncated sum leaves the comparison open.
    Undetermined,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeRow {
    pub sigma: BitString,
    pub condition: Condition,
    pub check: Check,
    /// Left-hand side, when it is a measure.
    pub value: Option<Dyadic>,
    /// Right-hand side from the summed terms alone.
    pub bound: Option<Dyadic>,
    /// True when `bound` omits the infinite tail.
    pub truncated: bool,
}

/// `Σ_{from ≤ i} 2^{−gap(i)}`, summed up to `horizon` with a certified tail
/// bound when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailSum {
    pub partial: Dyadic,
    pub upper: Option<Dyadic>,
    pub diverges: bool,
}

pub fn tail_sum(schedule: &LevelSchedule, from: usize, horizon: usize) -> TailSum {
    let last = match schedule.defined_levels() {
        Some(len) => horizon.min(len.saturating_sub(1)),
        None => horizon,
    };
    let partial: Dyadic = (from..last)
        .map(|i| Dyadic::cylinder(schedule.gap(i)))
        .sum();
    let report = (last > 0)
        .then(|| series_partial(schedule, last, None).ok())
        .flatten();
    let (upper, diverges) = match report {
        Some(r) if r.verdict == Verdict::Diverges => (None, true),
        Some(r) => (r.tail_bound.map(|t| &partial + &t), false),
        None => (None, false),
    };
    TailSum {
        partial,
        upper,
        diverges,
    }
}

/// Evaluates the four envelope conditions for every `σ` of length up to the
/// envelope length. Classes are optional per `σ`; without one the hitting
/// condition is not applicable.
pub fn check_envelope(
    e: &EnvelopeFamily,
    q: &FiniteTree,
    classes: &BTreeMap<BitString, TreeClass>,
    cap: usize,
) -> Result<Vec<EnvelopeRow>> {
    let mut rows = Vec::new();
    for len in 0..=e.length {
        let idx = e.levels[len];
        let tail = tail_sum(&e.schedule, idx, e.horizon.max(idx + 1));
        for sigma in BitString::all_of_length(len) {
            let h = e.set(&sigma);

            let mu = measure_of_intersection(&h, q.leaves());
            let base = Dyadic::pow2(e.r - len as i64);
            let lo = &base + &tail.partial;
            let (check, truncated) = if mu <= lo || tail.diverges {
                (Check::Pass, !tail.diverges)
            } else {
                match &tail.upper {
                    Some(u) if mu > &base + u => (Check::Fail, true),
                    _ => (Check::Undetermined, true),
                }
            };
            rows.push(EnvelopeRow {
                sigma: sigma.clone(),
                condition: Condition::MeasureBound,
                check,
                value: Some(mu),
                bound: Some(lo),
                truncated,
            });

            let check = match classes.get(&sigma) {
                Some(c) => {
                    if hits(&h, c, cap)?.hits {
                        Check::Pass
                    } else {
                        Check::Fail
                    }
                }
                None => Check::NotApplicable,
            };
            rows.push(row(&sigma, Condition::Hits, check));

            let check = if h.all_of_length(e.depth(&sigma)) {
                Check::Pass
            } else {
                Check::Fail
            };
            rows.push(row(&sigma, Condition::AtLevel, check));

            if len < e.length {
                let next = e.levels[len + 1];
                let bound: Dyadic = (idx..next)
                    .map(|i| Dyadic::cylinder(e.schedule.gap(i)))
                    .sum();
                let children = e.set(&sigma.child(false)).union(&e.set(&sigma.child(true)));
                let excess = measure_of_difference_within(&h, &children, q.leaves());
                rows.push(EnvelopeRow {
                    sigma: sigma.clone(),
                    condition: Condition::Telescoping,
                    check: if excess <= bound {
                        Check::Pass
                    } else {
                        Check::Fail
                    },
                    value: Some(excess),
                    bound: Some(bound),
                    truncated: false,
                });
            } else {
                rows.push(row(&sigma, Condition::Telescoping, Check::NotApplicable));
            }
        }
    }
    Ok(rows)
}

fn row(sigma: &BitString, condition: Condition, check: Check) -> EnvelopeRow {
    EnvelopeRow {
        sigma: sigma.clone(),
        condition,
        check,
        value: None,
        bound: None,
        truncated: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::{hitting_cost, CostMode};
    use crate::tree::tree;
    use crate::treespace::DEFAULT_CAP;

    fn checks(rows: &[EnvelopeRow], c: Condition) -> Vec<Check> {
        rows.iter()
            .filter(|r| r.condition == c)
            .map(|r| r.check)
            .collect()
    }

    fn family(r: i64, levels: Vec<usize>, fill: impl Fn(usize) -> StringSet) -> EnvelopeFamily {
        let s = LevelSchedule::linear(1).unwrap();
        let length = levels.len() - 1;
        let sets = (0..=length)
            .flat_map(BitString::all_of_length)
            .map(|sigma| {
                let d = s.value(levels[sigma.len()]);
                (sigma, fill(d))
            })
            .collect();
        EnvelopeFamily::new(r, s, levels, sets).unwrap()
    }

    fn all_classes(length: usize, h: usize) -> BTreeMap<BitString, TreeClass> {
        (0..=length)
            .flat_map(BitString::all_of_length)
            .map(|s| (s, TreeClass::all(h)))
            .collect()
    }

    #[test]
    fn levels_follow_the_rule() {
        let s = LevelSchedule::square();
        assert_eq!(envelope_levels(&s, 3, |k| k, 3).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(envelope_levels(&s, 0, |k| 5 * k, 2).unwrap(), vec![0, 3, 4]);
        let short = LevelSchedule::from_depths(vec![0, 1]).unwrap();
        assert!(envelope_levels(&short, 0, |_| 0, 2).is_err());
    }

    #[test]
    fn empty_sets_fail_only_hitting() {
        let e = family(0, vec![1, 2, 3], |_| StringSet::new());
        let rows =
            check_envelope(&e, &FiniteTree::full(3), &all_classes(2, 3), DEFAULT_CAP).unwrap();
        assert!(checks(&rows, Condition::Hits)
            .iter()
            .all(|&c| c == Check::Fail));
        assert!(checks(&rows, Condition::MeasureBound)
            .iter()
            .all(|&c| c == Check::Pass));
        assert!(checks(&rows, Condition::AtLevel)
            .iter()
            .all(|&c| c == Check::Pass));
        assert!(checks(&rows, Condition::Telescoping)
            .iter()
            .all(|&c| matches!(c, Check::Pass | Check::NotApplicable)));
    }

    #[test]
    fn full_levels_fail_the_measure_bound_once_it_drops_below_one() {
        // gaps 2, 4, 6, …: the tail from level i is 2^{-2i}/3
        let s: LevelSchedule = "n2+n".parse().unwrap();
        let levels = vec![0, 1];
        let sets = (0..=1)
            .flat_map(BitString::all_of_length)
            .map(|sigma| {
                let d = s.value(levels[sigma.len()]);
                (sigma, StringSet::level(d))
            })
            .collect();
        let e = EnvelopeFamily::new(-1, s, levels, sets).unwrap();
        let q = FiniteTree::full(2);
        let rows = check_envelope(&e, &q, &all_classes(1, 2), DEFAULT_CAP).unwrap();
        assert!(checks(&rows, Condition::Hits)
            .iter()
            .all(|&c| c == Check::Pass));
        // 1/2 + 1/3 and 1/4 + 1/12 are both below μ = 1
        assert!(checks(&rows, Condition::MeasureBound)
            .iter()
            .all(|&c| c == Check::Fail));
        assert!(checks(&rows, Condition::Telescoping)
            .iter()
            .all(|&c| matches!(c, Check::Pass | Check::NotApplicable)));
        let e0 = EnvelopeFamily { r: 0, ..e };
        let rows = check_envelope(&e0, &q, &BTreeMap::new(), DEFAULT_CAP).unwrap();
        assert_eq!(
            checks(&rows, Condition::MeasureBound),
            vec![Check::Pass, Check::Fail, Check::Fail]
        );
        assert!(checks(&rows, Condition::Hits)
            .iter()
            .all(|&c| c == Check::NotApplicable));
    }

    #[test]
    fn single_level_from_hitting_cost_passes() {
        let g = TreeClass::all(2).extends(tree(&["00", "11"]));
        let q = FiniteTree::full(2);
        let c = hitting_cost(&g, &q, 2, CostMode::Exact, DEFAULT_CAP).unwrap();
        let s = LevelSchedule::from_depths(vec![0, 2, 5, 9, 14]).unwrap();
        let levels = envelope_levels(&s, 2, |_| 0, 0).unwrap();
        let e = EnvelopeFamily::new(
            -2,
            s,
            levels,
            BTreeMap::from([(BitString::empty(), c.set.clone())]),
        )
        .unwrap();
        let classes = BTreeMap::from([(BitString::empty(), g)]);
        let rows = check_envelope(&e, &q, &classes, DEFAULT_CAP).unwrap();
        let by: Vec<Check> = rows.iter().map(|r| r.check).collect();
        assert_eq!(
            by,
            vec![Check::Pass, Check::Pass, Check::Pass, Check::NotApplicable]
        );
    }

    #[test]
    fn tail_sums() {
        let t = tail_sum(&LevelSchedule::square(), 1, 10);
        // Σ_{1≤i<10} 2^{-(2i+1)} plus the bound 2^{1-1-2·10}
        assert!(t.upper.is_some());
        assert!(!t.diverges);
        assert!(tail_sum(&LevelSchedule::linear(1).unwrap(), 0, 10).diverges);
        let explicit = tail_sum(&LevelSchedule::from_depths(vec![0, 1, 3]).unwrap(), 0, 10);
        assert_eq!(explicit.partial, "3/4".parse().unwrap());
        assert_eq!(explicit.upper, None);
    }
}
