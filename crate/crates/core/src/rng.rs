//! Counter-based random streams.
//!
//! A stream is identified by a 64-bit seed plus a path of integer keys (replica
//! index, lattice coordinates, ...). Draws never depend on the order in which
//! streams are created, so results do not change with the number of workers.

use rand::rand_core::impls;
use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the child stream reached from `seed` along `path`.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    let mut h = mix(seed ^ 0x6A09_E667_F3BC_C908);
    for &k in path {
        h = mix(h ^ mix(k.wrapping_add(GOLDEN)));
    }
    h
}

/// SplitMix64 stream: the n-th output is a bijective hash of seed + n*GOLDEN.
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn keyed(seed: u64, path: &[u64]) -> Self {
        Self::new(derive(seed, path))
    }

    /// Uniform in [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the open interval (0, 1).
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

impl RngCore for Stream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}
