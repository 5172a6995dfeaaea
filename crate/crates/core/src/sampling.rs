//! Seeded test-point generation.
//!
//! Random rational points have numerators in `1..=50` and denominators in
//! `1..=10`. Every suite derives its generator from a base seed and a stream
//! number, so results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Rat;

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64, stream: u64) -> TestRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for a `(suite, shard)` pair, stable across runs.
pub fn stream_id(parts: &[u64]) -> u64 {
    // FNV-1a over the parts.
    parts.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &p| {
        p.to_le_bytes()
            .iter()
            .fold(h, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
    })
}

pub fn random_rational(rng: &mut impl Rng) -> Rat {
    let num: i64 = rng.gen_range(1..=50);
    let den: i64 = rng.gen_range(1..=10);
    Rat::new(num.into(), den.into())
}

pub fn random_point(rng: &mut impl Rng, k: usize) -> Vec<Rat> {
    (0..k).map(|_| random_rational(rng)).collect()
}

/// Uniform float point with coordinates in `[lo, hi]`.
pub fn random_real_point(rng: &mut impl Rng, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..k).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Integer coordinates as exact rationals.
pub fn ints(values: &[i64]) -> Vec<Rat> {
    values.iter().map(|&v| Rat::from_integer(v.into())).collect()
}
