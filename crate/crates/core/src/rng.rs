//! Seeded substreams for reproducible, shard-independent sampling.
//!
//! Every sample is drawn from ChaCha8 keyed by `(seed, stream)`, so the
//! value of sample `k` does not depend on how the index range is split
//! across workers.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Two independent standard normals by Box-Muller.
pub fn normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    // 1 - u lies in (0, 1], keeping the log finite
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}
