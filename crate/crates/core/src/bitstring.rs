use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A finite binary word. The empty word `λ` is valid.
///
/// Ordered by length first, then lexicographically.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// The `len`-bit word spelling `value` in binary, most significant bit first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        BitString { bits }
    }

    /// Inverse of [`BitString::from_u64`]; only meaningful for `len() <= 64`.
    pub fn to_u64(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.bits.pop()
    }

    pub fn child(&self, b: bool) -> BitString {
        let mut c = self.clone();
        c.bits.push(b);
        c
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// `self ≺ other`.
    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The `n`-bit prefix. Panics if `n > len()`.
    pub fn prefix(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// Bits `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// The suffix after the first `n` bits.
    pub fn tail(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[n..].to_vec(),
        }
    }

    /// All proper and improper prefixes, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..=self.len()).map(move |n| self.prefix(n))
    }

    /// All words of length `n` in canonical order. Requires `n < 64`.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "refusing to enumerate 2^{n} words");
        (0..(1u64 << n)).map(move |v| BitString::from_u64(v, n))
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .take_while(|(a, b)| a == b)
            .count()
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("λ");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Parses `0`/`1` words; `λ` or the empty string is the empty word.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "λ" {
            return Ok(BitString::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitString::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `bs("0101")`.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}
