//! Deterministic, labeled random streams.
//!
//! Every source of randomness in a run is a [`RandomSource`] derived from the
//! run's master seed through a chain of text labels. Each derivation hashes the
//! parent key with the label, so a substream depends only on the label path and
//! never on how much randomness sibling streams have consumed.

use rand::{Error as RandError, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// A reproducible pseudo-random stream with labeled child streams.
#[derive(Clone, Debug)]
pub struct RandomSource {
    key: [u8; 32],
    stream: ChaCha8Rng,
}

impl RandomSource {
    /// Root stream for a master seed.
    pub fn new(master_seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"fair-election/root");
        hasher.update(master_seed.to_le_bytes());
        Self::from_key(hasher.finalize().into())
    }

    fn from_key(key: [u8; 32]) -> Self {
        Self {
            key,
            stream: ChaCha8Rng::from_seed(key),
        }
    }

    /// Child stream identified by `label`. Does not advance `self`.
    pub fn derive(&self, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        Self::from_key(hasher.finalize().into())
    }

    /// One fair bit.
    pub fn fair_bit(&mut self) -> bool {
        self.stream.next_u32() & 1 == 1
    }

    /// A bit that is 1 with probability `p`; `p` of exactly 0 or 1 is deterministic.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.stream.gen_bool(p)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.stream.gen::<f64>()
    }

    /// Uniform index in `[0, upper)`.
    pub fn below(&mut self, upper: usize) -> usize {
        self.stream.gen_range(0..upper)
    }
}

/// Labeled substream of the root stream for `seed`.
pub fn derive_stream(seed: u64, label: &str) -> RandomSource {
    RandomSource::new(seed).derive(label)
}

/// Seed for the `index`-th independent trial of an experiment.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    derive_stream(master_seed, &format!("trial-{index}")).next_u64()
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.stream.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.stream.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.stream.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.stream.try_fill_bytes(dest)
    }
}
