//! Seeded random number generation.
//!
//! Every stochastic component takes an explicit [`Rng`]. The generator is
//! ChaCha8, so a (seed, stream) pair fully determines the sequence on every
//! platform. Independent sub-streams let best-of-R trials run in any order
//! (or concurrently) without changing results: trial `t` always sees the
//! same draws.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform random source with explicit seeding and cheap sub-streams.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    /// Stream used by a component that needs one "main" sequence per seed.
    pub fn seed_from(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream `stream` of the generator seeded with `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in the half-open interval `[a, b)`.
    pub fn uniform(&mut self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b, "uniform bounds out of order");
        a + (b - a) * self.inner.random::<f64>()
    }

    /// Uniform index in `0..n` as `floor(uniform(0, n))`.
    ///
    /// `n` must be positive. The product `u * n` with `u < 1` stays strictly
    /// below `n` for every n < 2^53, so the result is always in range.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0, "index over empty range");
        self.uniform(0.0, n as f64) as usize
    }

    /// Derive a fresh seed, for handing independent generators to sub-tasks.
    pub fn next_seed(&mut self) -> u64 {
        self.inner.random::<u64>()
    }
}

// Lets distributions from `rand_distr` sample straight off this source.
impl rand::RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        rand::RngCore::next_u32(&mut self.inner)
    }

    fn next_u64(&mut self) -> u64 {
        rand::RngCore::next_u64(&mut self.inner)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        rand::RngCore::fill_bytes(&mut self.inner, dest)
    }
}

/// Stateless seed derivation (SplitMix64) for keying per-day or
/// per-repetition work off one master seed without sharing a stream.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
