use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::bitstring::BitString;
use crate::kc::allocator::KcAllocator;

/// Where an oracle's upper bounds come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Stub,
    KcMachine,
    ExternalCompressor,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Stub => "stub",
            Provenance::KcMachine => "kc-machine",
            Provenance::ExternalCompressor => "external-compressor",
        })
    }
}

/// An upper bound on description length. Statements built on it are about
/// the bound, never about true prefix-free complexity.
pub trait ComplexityOracle {
    fn upper(&self, sigma: &BitString) -> usize;
    fn provenance(&self) -> Provenance;
}

/// `upper(σ) = |σ|`: every string incompressible.
#[derive(Clone, Copy, Debug, Default)]
pub struct StubOracle;

impl ComplexityOracle for StubOracle {
    fn upper(&self, sigma: &BitString) -> usize {
        sigma.len()
    }
    fn provenance(&self) -> Provenance {
        Provenance::Stub
    }
}

/// Explicit bounds for a few strings, `|σ|` elsewhere.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    pub bounds: BTreeMap<BitString, usize>,
}

impl TableOracle {
    pub fn new(bounds: impl IntoIterator<Item = (BitString, usize)>) -> Self {
        TableOracle {
            bounds: bounds.into_iter().collect(),
        }
    }
}

impl ComplexityOracle for TableOracle {
    fn upper(&self, sigma: &BitString) -> usize {
        self.bounds.get(sigma).copied().unwrap_or(sigma.len())
    }
    fn provenance(&self) -> Provenance {
        Provenance::Stub
    }
}

/// Code lengths of an allocator's machine; strings it does not describe get `|σ|`.
#[derive(Clone, Debug)]
pub struct MachineOracle {
    lengths: BTreeMap<BitString, usize>,
}

impl MachineOracle {
    pub fn new(machine: &KcAllocator) -> Self {
        MachineOracle {
            lengths: machine.code_lengths(),
        }
    }
}

impl ComplexityOracle for MachineOracle {
    fn upper(&self, sigma: &BitString) -> usize {
        self.lengths.get(sigma).copied().unwrap_or(sigma.len())
    }
    fn provenance(&self) -> Provenance {
        Provenance::KcMachine
    }
}

/// Bounds from an arbitrary function, typically a compressor's output length
/// plus a decoder constant.
pub struct FnOracle<F> {
    f: F,
    provenance: Provenance,
}

impl<F: Fn(&BitString) -> usize> FnOracle<F> {
    pub fn compressor(f: F) -> Self {
        FnOracle {
            f,
            provenance: Provenance::ExternalCompressor,
        }
    }
}

impl<F: Fn(&BitString) -> usize> ComplexityOracle for FnOracle<F> {
    fn upper(&self, sigma: &BitString) -> usize {
        (self.f)(sigma)
    }
    fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// Length of a prefix-free run-length code for `σ`: Elias gamma of `|σ|+1`,
/// then the first bit, then the gamma code of each run. A decoder stops once
/// the runs add up to `|σ|`, so this bounds description length for a fixed
/// decoder and stands in for an external compressor.
pub fn run_length_bound(sigma: &BitString) -> usize {
    let mut total = gamma_len(sigma.len() + 1);
    if sigma.is_empty() {
        return total;
    }
    total += 1;
    let mut run = 1usize;
    for w in sigma.bits().windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += gamma_len(run);
            run = 1;
        }
    }
    total + gamma_len(run)
}

fn gamma_len(n: usize) -> usize {
    let bits = usize::BITS - n.leading_zeros();
    2 * bits as usize - 1
}
