//! Counter-based random streams.
//!
//! Every draw is addressed by `(seed, stream, key)` so the value a point or a
//! bond receives does not depend on iteration order or on the thread that
//! asks for it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tag for per-point phase sampling.
pub const PHASE_STREAM: u64 = 0x7068_6173_65;
/// Stream tag for per-bond pore draws.
pub const PORE_STREAM: u64 = 0x706f_7265;

#[derive(Debug, Clone)]
pub struct IndexedStream {
    base: ChaCha8Rng,
}

impl IndexedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut base = ChaCha8Rng::seed_from_u64(seed);
        base.set_stream(stream);
        Self { base }
    }

    /// Uniform sample in `[0, 1)` for `key`; `lane` selects one of four
    /// independent values per key.
    pub fn uniform(&self, key: u64, lane: u8) -> f64 {
        debug_assert!(lane < 4);
        let mut rng = self.base.clone();
        // 4 lanes of u64 = 8 words of u32 per key
        rng.set_word_pos(((key as u128) << 3) | ((lane as u128) << 1));
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Order-independent key for the unordered pair `{i, j}`.
pub fn pair_key(i: usize, j: usize) -> u64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    ((a as u64) << 32) | b as u64
}
