//! Deterministic random source.
//!
//! The generator is ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`): a
//! counter-based stream cipher whose output is specified byte-for-byte, so an
//! identical `(seed, stream)` pair reproduces the identical value sequence on
//! every platform. Parallel workers never share state — each sample gets its
//! own stream derived from its id (see [`stream_for_sample`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Seeded, streamed random generator handed explicitly to every stochastic
/// operation in the toolkit.
#[derive(Debug, Clone)]
pub struct SeedRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeedRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Fresh generator on a different stream of the same seed.
    pub fn fork(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Uniform in `[0, 1)`.
    pub fn gen_f64(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform in `[0, 1)`.
    pub fn gen_f32(&mut self) -> f32 {
        self.inner.gen::<f32>()
    }

    /// Uniform in `[lo, hi]` (closed); `lo == hi` returns `lo` without
    /// consuming randomness, which is what makes zero-strength augmentations
    /// bitwise identities.
    pub fn gen_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.inner.gen_range(lo..=hi)
    }

    /// Uniform integer in `[0, n)`.
    pub fn gen_index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Bernoulli gate; `p <= 0` never fires and consumes no randomness,
    /// `p >= 1` always fires and consumes one draw.
    pub fn gen_bool(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            return false;
        }
        self.inner.gen::<f64>() < p
    }

    /// Random sign, +1 or -1.
    pub fn gen_sign(&mut self) -> f64 {
        if self.inner.gen::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.inner.gen_range(0..=i);
            items.swap(i, j);
        }
    }
}

/// Stream id for a named sample: the first 8 bytes (little-endian) of
/// `SHA-256(id)`. Keying every sample's randomness by its id keeps parallel
/// schedules from reordering RNG consumption.
pub fn stream_for_sample(id: &str) -> u64 {
    let digest = Sha256::digest(id.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Stream id for a sample at a given training step (`SHA-256("id:step")`),
/// so an augmentation draw differs across steps but never across workers.
pub fn stream_for_sample_step(id: &str, step: u64) -> u64 {
    stream_for_sample(&format!("{id}:{step}"))
}
