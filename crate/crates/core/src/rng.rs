//! Seeded randomness.
//!
//! Every random choice in the crate is driven by PCG-XSH-RR 64/32 (`Pcg32`),
//! a 64-bit-state generator with a published reference algorithm, started
//! with `Pcg32::new(seed, DEFAULT_STREAM)`. Index draws use the
//! multiply-shift reduction `(u32 · m) >> 32`, which keeps the procedures
//! reproducible from their description alone.

use rand::RngCore;
use rand_pcg::Pcg32;

/// Increment constant of the PCG reference implementation.
pub const DEFAULT_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

pub fn seeded(seed: u64) -> Pcg32 {
    Pcg32::new(seed, DEFAULT_STREAM)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent sub-seed for item `(a, b)` of a seeded computation, so items
/// can be evaluated in any order or in parallel.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    mix64(mix64(mix64(seed) ^ a.wrapping_add(0x9e37_79b9_7f4a_7c15)) ^ b)
}

/// Uniform index in `0..m` (for `m ≤ 2^32`).
pub fn index_below<R: RngCore>(rng: &mut R, m: usize) -> usize {
    debug_assert!(m > 0 && m as u64 <= 1 << 32);
    ((u64::from(rng.next_u32()) * m as u64) >> 32) as usize
}

/// Fisher–Yates over the first `take` positions: afterwards `items[..take]`
/// is a uniform random selection (in random order) from `items`.
pub fn partial_shuffle<R: RngCore, T>(rng: &mut R, items: &mut [T], take: usize) {
    let n = items.len();
    for i in 0..take.min(n) {
        let j = i + index_below(rng, n - i);
        items.swap(i, j);
    }
}
