//! Portable seeded randomness.
//!
//! All stochastic procedures draw from xoshiro256++ seeded through
//! `seed_from_u64`, and sample with the explicit procedures below, so a seed
//! yields the same stream and the same splits on every platform.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type PortableRng = Xoshiro256PlusPlus;

pub const DEFAULT_SEED: u64 = 42;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn rng_from_seed(seed: u64) -> PortableRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Generator for iteration `index` of a repeated protocol run with `seed`.
pub fn iteration_rng(seed: u64, index: u64) -> PortableRng {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN))
}

/// Uniform integer in `[0, bound)` by reduction of a 64-bit draw.
pub fn below(rng: &mut PortableRng, bound: usize) -> usize {
    debug_assert!(bound > 0);
    (rng.next_u64() % bound as u64) as usize
}

/// Moves a uniformly random `k`-subset of `items` to the front (partial Fisher-Yates).
pub fn partial_shuffle<T>(rng: &mut PortableRng, items: &mut [T], k: usize) {
    let n = items.len();
    for i in 0..k.min(n) {
        let j = i + below(rng, n - i);
        items.swap(i, j);
    }
}

/// Uniform in `[-1, 1)` from the top 53 bits of a draw.
pub fn symmetric_unit(rng: &mut PortableRng) -> f64 {
    let bits = rng.next_u64() >> 11;
    (bits as f64) * (2.0 / (1u64 << 53) as f64) - 1.0
}
