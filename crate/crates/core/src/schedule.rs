//! Level schedules `ℓ = (ℓ_n)` and the series `Σ 2^{-(ℓ_{n+1} - ℓ_n)}`.
//!
//! Index 0 is always depth 0 (the root level). Closed-form schedules are
//! infinite; explicit schedules define only the listed levels.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    /// `quad·n² + lin·n`
    Quadratic {
        quad: u64,
        lin: u64,
    },
    /// `value(i+1) = Σ_{j≤i} (2j + c)`, i.e. `n² + (c-1)·n`.
    Paper {
        c: u64,
    },
    Explicit(Vec<usize>),
}

/// A strictly increasing depth sequence with `value(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelSchedule {
    kind: Kind,
}

impl LevelSchedule {
    /// `value(n) = quad·n² + lin·n`. Needs `quad + lin ≥ 1`.
    pub fn quadratic(quad: u64, lin: u64) -> Result<Self> {
        if quad + lin == 0 {
            return Err(Error::pre("schedule gap at index 0 would be 0"));
        }
        Ok(LevelSchedule {
            kind: Kind::Quadratic { quad, lin },
        })
    }

    /// Constant gap `g`: depths `0, g, 2g, ...`.
    pub fn linear(g: u64) -> Result<Self> {
        LevelSchedule::quadratic(0, g)
    }

    /// `n²`.
    pub fn square() -> Self {
        LevelSchedule {
            kind: Kind::Quadratic { quad: 1, lin: 0 },
        }
    }

    /// The schedule `l_i = Σ_{j≤i}(2j+c)`, shifted so that `value(i+1) = l_i`.
    pub fn from_paper(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::pre(
                "c must be at least 1 (gap at index 0 would be 0)",
            ));
        }
        Ok(LevelSchedule {
            kind: Kind::Paper { c },
        })
    }

    /// Finite schedule from explicit depths; the first must be 0.
    pub fn from_depths(depths: Vec<usize>) -> Result<Self> {
        if depths.first() != Some(&0) {
            return Err(Error::pre("explicit schedules start at depth 0"));
        }
        if depths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::pre(format!(
                "depths {depths:?} are not strictly increasing"
            )));
        }
        Ok(LevelSchedule {
            kind: Kind::Explicit(depths),
        })
    }

    /// Finite schedule from its gaps: depths are the prefix sums starting at 0.
    pub fn from_gaps(gaps: &[usize]) -> Result<Self> {
        let mut depths = vec![0];
        for g in gaps {
            depths.push(depths.last().unwrap() + g);
        }
        LevelSchedule::from_depths(depths)
    }

    fn closed(&self) -> Option<(u64, u64)> {
        match self.kind {
            Kind::Quadratic { quad, lin } => Some((quad, lin)),
            Kind::Paper { c } => Some((1, c - 1)),
            Kind::Explicit(_) => None,
        }
    }

    /// Number of defined indices, or `None` for an infinite schedule.
    pub fn defined_levels(&self) -> Option<usize> {
        match &self.kind {
            Kind::Explicit(d) => Some(d.len()),
            _ => None,
        }
    }

    pub fn is_defined(&self, n: usize) -> bool {
        self.defined_levels().is_none_or(|len| n < len)
    }

    pub fn try_value(&self, n: usize) -> Option<usize> {
        match (&self.kind, self.closed()) {
            (Kind::Explicit(d), _) => d.get(n).copied(),
            (_, Some((quad, lin))) => {
                let n = n as u64;
                quad.checked_mul(n)?
                    .checked_mul(n)?
                    .checked_add(lin.checked_mul(n)?)
                    .map(|v| v as usize)
            }
            _ => unreachable!(),
        }
    }

    /// Depth of level `n`. Panics past the end of an explicit schedule.
    pub fn value(&self, n: usize) -> usize {
        self.try_value(n)
            .unwrap_or_else(|| panic!("schedule {self} has no level {n}"))
    }

    /// `value(n+1) - value(n)`.
    pub fn gap(&self, n: usize) -> usize {
        self.value(n + 1) - self.value(n)
    }

    /// The affine form `gap(n) = p + q·n` when the schedule is closed-form.
    pub fn gap_form(&self) -> Option<(i64, i64)> {
        self.closed()
            .map(|(quad, lin)| ((quad + lin) as i64, 2 * quad as i64))
    }

    /// Index `n` with `value(n) == depth`, if any.
    pub fn level_of_depth(&self, depth: usize) -> Option<usize> {
        let mut n = 0;
        while let Some(v) = self.try_value(n) {
            match v.cmp(&depth) {
                std::cmp::Ordering::Equal => return Some(n),
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Less => n += 1,
            }
        }
        None
    }

    /// Smallest `n` with `value(n) ≥ depth`.
    pub fn first_level_at_least(&self, depth: usize) -> Option<usize> {
        (0..)
            .map_while(|n| self.try_value(n).map(|v| (n, v)))
            .find(|&(_, v)| v >= depth)
            .map(|(n, _)| n)
    }

    /// Depths `value(0..=n)`.
    pub fn depths(&self, n: usize) -> Vec<usize> {
        (0..=n).map(|i| self.value(i)).collect()
    }

    fn require_levels(&self, n: usize) -> Result<()> {
        if self.is_defined(n) {
            Ok(())
        } else {
            Err(Error::pre(format!(
                "schedule {self} does not define level {n}"
            )))
        }
    }
}

impl fmt::Display for LevelSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Quadratic { quad: 0, lin: 1 } => f.write_str("n"),
            Kind::Quadratic { quad: 0, lin } => write!(f, "{lin}n"),
            Kind::Quadratic { quad, lin } => {
                if *quad == 1 {
                    f.write_str("n2")?;
                } else {
                    write!(f, "{quad}n2")?;
                }
                match lin {
                    0 => Ok(()),
                    1 => f.write_str("+n"),
                    l => write!(f, "+{l}n"),
                }
            }
            Kind::Paper { c } => write!(f, "paper:{c}"),
            Kind::Explicit(d) => {
                f.write_str("depths:")?;
                for (i, v) in d.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for LevelSchedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Schedule specs: `n`, `3n`, `n2`, `2n2`, `n2+3n`, `square`, `paper:<c>`,
/// `depths:0,1,3`, `gaps:1,2`.
impl FromStr for LevelSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unrecognised schedule {s:?}"));
        let list = |t: &str| -> Result<Vec<usize>> {
            t.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect()
        };
        if s == "square" {
            return Ok(LevelSchedule::square());
        }
        if let Some(c) = s.strip_prefix("paper:") {
            return LevelSchedule::from_paper(c.parse().map_err(|_| bad())?);
        }
        if let Some(d) = s.strip_prefix("depths:") {
            return LevelSchedule::from_depths(list(d)?);
        }
        if let Some(g) = s.strip_prefix("gaps:") {
            return LevelSchedule::from_gaps(&list(g)?);
        }
        let coef = |t: &str| -> Result<u64> {
            if t.is_empty() {
                Ok(1)
            } else {
                t.parse().map_err(|_| bad())
            }
        };
        let (mut quad, mut lin) = (0, 0);
        for term in s.split('+') {
            let term = term.trim();
            if let Some(c) = term.strip_suffix("n2") {
                quad += coef(c)?;
            } else if let Some(c) = term.strip_suffix('n') {
                lin += coef(c)?;
            } else {
                return Err(bad());
            }
        }
        LevelSchedule::quadratic(quad, lin)
    }
}

/// Certificate that a term exponent satisfies `e(n) ≥ offset + slope·n` for all `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AffineWitness {
    pub offset: i64,
    pub slope: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converges,
    Diverges,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    /// Supplied by the caller and checked against the closed form.
    User,
    /// Supplied by the caller, checked only on the computed prefix.
    UserPrefixChecked,
    /// Read off the schedule's closed form.
    ClosedForm,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub terms: usize,
    /// `Σ_{n<terms} 2^{-e(n)}`
    pub partial: Dyadic,
    /// Upper bound on `Σ_{n≥terms} 2^{-e(n)}`, when certified.
    pub tail_bound: Option<Dyadic>,
    pub verdict: Verdict,
    pub witness: Option<AffineWitness>,
    pub witness_source: WitnessSource,
}

/// Sums `2^{-e(n)}` for `n < terms` and classifies the infinite series.
///
/// `closed` is the exact affine form of `e` when known. A witness with
/// `slope ≥ 1` certifies convergence with tail `≤ 2^{1 - offset - slope·terms}`;
/// a closed form with non-positive slope certifies divergence.
fn exponent_series(
    exponent: impl Fn(usize) -> i64,
    closed: Option<(i64, i64)>,
    terms: usize,
    witness: Option<AffineWitness>,
) -> Result<SeriesReport> {
    let partial: Dyadic = (0..terms).map(|n| Dyadic::pow2(-exponent(n))).sum();

    let (witness, source) = match (witness, closed) {
        (Some(w), Some((p, q))) => {
            if w.offset > p || w.slope > q {
                return Err(Error::pre(format!(
                    "witness {} + {}·n exceeds the exponent {p} + {q}·n",
                    w.offset, w.slope
                )));
            }
            (Some(w), WitnessSource::User)
        }
        (Some(w), None) => {
            if let Some(n) = (0..terms).find(|&n| exponent(n) < w.offset + w.slope * n as i64) {
                return Err(Error::pre(format!("witness fails at index {n}")));
            }
            (Some(w), WitnessSource::UserPrefixChecked)
        }
        (None, Some((p, q))) if q >= 1 => (
            Some(AffineWitness {
                offset: p,
                slope: q,
            }),
            WitnessSource::ClosedForm,
        ),
        (None, _) => (None, WitnessSource::None),
    };

    let certified = witness.filter(|w| w.slope >= 1);
    let tail_bound = certified.map(|w| Dyadic::pow2(1 - w.offset - w.slope * terms as i64));
    let verdict = if certified.is_some() {
        Verdict::Converges
    } else if matches!(closed, Some((_, q)) if q <= 0) {
        Verdict::Diverges
    } else {
        Verdict::Unknown
    };
    Ok(SeriesReport {
        terms,
        partial,
        tail_bound,
        verdict,
        witness,
        witness_source: source,
    })
}

/// `Σ_{n<N} 2^{-gap(n)}` with a convergence verdict.
pub fn series_partial(
    schedule: &LevelSchedule,
    terms: usize,
    witness: Option<AffineWitness>,
) -> Result<SeriesReport> {
    if terms == 0 {
        return Err(Error::pre("series_partial needs N >= 1"));
    }
    schedule.require_levels(terms)?;
    exponent_series(
        |n| schedule.gap(n) as i64,
        schedule.gap_form(),
        terms,
        witness,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub levels_checked: usize,
    /// Indices `n` with `gap_ℓ(n) < gap_m(n)`.
    pub dominance_violations: Vec<usize>,
    /// The series `Σ 2^{-(gap_m(n) - n)}`.
    pub m_series: SeriesReport,
    pub hypothesis_holds: bool,
}

/// Checks `gap_ℓ(n) ≥ gap_m(n)` for `n < N` and sums `Σ_{n<N} 2^{-(gap_m(n) - n)}`.
pub fn compat_check(
    l: &LevelSchedule,
    m: &LevelSchedule,
    terms: usize,
    witness: Option<AffineWitness>,
) -> Result<CompatReport> {
    if terms == 0 {
        return Err(Error::pre("compat_check needs N >= 1"));
    }
    l.require_levels(terms)?;
    m.require_levels(terms)?;
    let dominance_violations: Vec<usize> = (0..terms).filter(|&n| l.gap(n) < m.gap(n)).collect();
    let closed = m.gap_form().map(|(p, q)| (p, q - 1));
    let m_series = exponent_series(|n| m.gap(n) as i64 - n as i64, closed, terms, witness)?;
    let hypothesis_holds =
        dominance_violations.is_empty() && m_series.verdict == Verdict::Converges;
    Ok(CompatReport {
        levels_checked: terms,
        dominance_violations,
        m_series,
        hypothesis_holds,
    })
}
