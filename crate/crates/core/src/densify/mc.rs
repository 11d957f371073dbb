use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::rng::RngSeed;
use crate::schedule::LevelSchedule;
use crate::treespace::sample_tree_with;

use super::{check_dominance, phi_via_extract};

/// Samples per parallel chunk. Chunk `i` draws from the seed's stream at word
/// offset `i·2^48`, so results do not depend on the thread count.
pub const CHUNK: u64 = 2048;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub level: usize,
    pub l_gap: usize,
    pub m_gap: usize,
    /// ℓ-nodes at this level over all samples.
    pub l_nodes: u64,
    /// Those with a single extension.
    pub l_single: u64,
    /// `2^{−ℓgap}`, the exact single-extension probability of one node.
    pub leaf_expected: Dyadic,
    pub leaf_observed: f64,
    /// Binomial SE of the node rate at `leaf_expected`.
    pub leaf_se: f64,
    /// Samples with some single-extension ℓ-node at this level.
    pub l_failures: u64,
    /// `2^{level − ℓgap}`
    pub l_bound: Dyadic,
    pub l_observed: f64,
    pub l_se: f64,
    /// Samples whose image has a single-extension m-node at this level.
    pub m_failures: u64,
    /// `2^{level − mgap}`
    pub m_bound: Dyadic,
    pub m_observed: f64,
    pub m_se: f64,
    pub phi_nodes: u64,
    /// Image nodes with more than two extensions.
    pub phi_over_two: u64,
    pub over_two_observed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub l: LevelSchedule,
    pub m: LevelSchedule,
    pub n: usize,
    pub samples: u64,
    pub seed: RngSeed,
    pub rows: Vec<McRow>,
}

#[derive(Clone, Default)]
struct Counts {
    l_nodes: Vec<u64>,
    l_single: Vec<u64>,
    l_failures: Vec<u64>,
    m_failures: Vec<u64>,
    phi_nodes: Vec<u64>,
    phi_over_two: Vec<u64>,
}

impl Counts {
    fn new(n: usize) -> Self {
        let z = vec![0; n];
        Counts {
            l_nodes: z.clone(),
            l_single: z.clone(),
            l_failures: z.clone(),
            m_failures: z.clone(),
            phi_nodes: z.clone(),
            phi_over_two: z,
        }
    }

    fn merge(mut self, o: Counts) -> Counts {
        for (a, b) in [
            (&mut self.l_nodes, &o.l_nodes),
            (&mut self.l_single, &o.l_single),
            (&mut self.l_failures, &o.l_failures),
            (&mut self.m_failures, &o.m_failures),
            (&mut self.phi_nodes, &o.phi_nodes),
            (&mut self.phi_over_two, &o.phi_over_two),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }
}

fn run_chunk(
    l: &LevelSchedule,
    m: &LevelSchedule,
    n: usize,
    seed: RngSeed,
    chunk: u64,
    count: u64,
) -> Result<Counts> {
    let mut rng = seed.rng();
    rng.set_word_pos((chunk as u128) << 48);
    let mut c = Counts::new(n);
    for _ in 0..count {
        let t = sample_tree_with(l, n, &mut rng)?;
        let img = phi_via_extract(&t, m)?;
        for k in 0..n {
            let hi = l.value(k + 1);
            let nodes = t.slice(k);
            let single = nodes
                .iter()
                .filter(|s| t.tree().extensions(s, hi).len() == 1)
                .count() as u64;
            c.l_nodes[k] += nodes.len() as u64;
            c.l_single[k] += single;
            c.l_failures[k] += u64::from(single > 0);
            let ext: Vec<usize> = img.slices[k].iter().map(|s| img.extensions(k, s)).collect();
            c.m_failures[k] += u64::from(ext.contains(&1));
            c.phi_nodes[k] += ext.len() as u64;
            c.phi_over_two[k] += ext.iter().filter(|&&e| e > 2).count() as u64;
        }
    }
    Ok(c)
}

fn rate(hits: u64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        hits as f64 / trials as f64
    }
}

fn se(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

/// Samples `T ∈ T_ℓ` to level `n` and records, per level `k < n`, how often
/// `T` and `Φ(T)` fail to branch against the union bounds `2^{k−gap}`.
pub fn mc_experiment(
    l: &LevelSchedule,
    m: &LevelSchedule,
    n: usize,
    samples: u64,
    seed: RngSeed,
) -> Result<McReport> {
    check_dominance(l, m, n)?;
    let chunks: Vec<(u64, u64)> = (0..samples.div_ceil(CHUNK))
        .map(|i| (i, CHUNK.min(samples - i * CHUNK)))
        .collect();
    let counts = chunks
        .par_iter()
        .map(|&(i, count)| run_chunk(l, m, n, seed, i, count))
        .try_reduce(|| Counts::new(n), |a, b| Ok(a.merge(b)))?;

    let rows = (0..n)
        .map(|k| {
            let (lg, mg) = (l.gap(k), m.gap(k));
            let leaf_expected = Dyadic::pow2(-(lg as i64));
            let l_observed = rate(counts.l_failures[k], samples);
            let m_observed = rate(counts.m_failures[k], samples);
            McRow {
                level: k,
                l_gap: lg,
                m_gap: mg,
                l_nodes: counts.l_nodes[k],
                l_single: counts.l_single[k],
                leaf_observed: rate(counts.l_single[k], counts.l_nodes[k]),
                leaf_se: se(leaf_expected.to_f64(), counts.l_nodes[k]),
                leaf_expected,
                l_failures: counts.l_failures[k],
                l_bound: Dyadic::pow2(k as i64 - lg as i64),
                l_observed,
                l_se: se(l_observed, samples),
                m_failures: counts.m_failures[k],
                m_bound: Dyadic::pow2(k as i64 - mg as i64),
                m_observed,
                m_se: se(m_observed, samples),
                phi_nodes: counts.phi_nodes[k],
                phi_over_two: counts.phi_over_two[k],
                over_two_observed: rate(counts.phi_over_two[k], counts.phi_nodes[k]),
            }
        })
        .collect();
    Ok(McReport {
        l: l.clone(),
        m: m.clone(),
        n,
        samples,
        seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_level_records_nothing() {
        let r = mc_experiment(
            &LevelSchedule::square(),
            &LevelSchedule::square(),
            0,
            100,
            RngSeed::new(1, 0),
        )
        .unwrap();
        assert!(r.rows.is_empty());
    }

    #[test]
    fn reproducible_and_chunk_independent() {
        let l: LevelSchedule = "2n2".parse().unwrap();
        let m = LevelSchedule::square();
        let a = mc_experiment(&l, &m, 3, 3000, RngSeed::new(7, 0)).unwrap();
        let b = mc_experiment(&l, &m, 3, 3000, RngSeed::new(7, 0)).unwrap();
        assert_eq!(a, b);
        let c = mc_experiment(&l, &m, 3, 3000, RngSeed::new(7, 1)).unwrap();
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn rates_near_exact_values() {
        let l = LevelSchedule::linear(3).unwrap();
        let m = LevelSchedule::linear(2).unwrap();
        let r = mc_experiment(&l, &m, 3, 20_000, RngSeed::new(3, 0)).unwrap();
        for row in &r.rows {
            let p = row.leaf_expected.to_f64();
            assert!(
                (row.leaf_observed - p).abs() <= 4.0 * row.leaf_se,
                "{row:?}"
            );
            assert!(row.l_observed <= row.l_bound.to_f64() + 4.0 * row.l_se);
            assert!(row.m_observed <= row.m_bound.to_f64() + 4.0 * row.m_se);
        }
        // level 0 has one node, so one failure per single-extension root
        assert_eq!(r.rows[0].l_failures, r.rows[0].l_single);
    }

    #[test]
    fn dominance_is_required() {
        let l = LevelSchedule::linear(1).unwrap();
        let m = LevelSchedule::linear(2).unwrap();
        assert!(mc_experiment(&l, &m, 2, 10, RngSeed::new(0, 0)).is_err());
    }
}
