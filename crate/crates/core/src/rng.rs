use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;

/// Seed plus stream id. Identical pairs reproduce identical draws; parallel
/// samplers must use distinct streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngSeed { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// A uniformly random word of length `len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, len: usize) -> BitString {
    let mut bits = Vec::with_capacity(len);
    let mut left = len;
    while left > 0 {
        let take = left.min(64);
        let w: u64 = rng.gen();
        bits.extend((0..take).map(|i| (w >> i) & 1 == 1));
        left -= take;
    }
    BitString::from_bits(bits)
}
