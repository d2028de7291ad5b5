use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier written into result metadata.
pub const RNG_ALGORITHM: &str = "chacha8(rand_chacha 0.9; key=seed_from_u64(seed), stream=stream_id)";

/// A reproducible random stream.
///
/// ChaCha8 keyed from `seed` with the 64-bit stream selector set to
/// `stream_id`, so the sequence depends only on the pair and is identical on
/// every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    /// Stream for one `(grid point, repetition)` job of an experiment.
    ///
    /// `seed = splitmix64(master_seed + splitmix64(grid_index))` and
    /// `stream_id = repetition`.
    pub fn for_job(master_seed: u64, grid_index: u64, repetition: u64) -> Self {
        let seed = splitmix64(master_seed.wrapping_add(splitmix64(grid_index)));
        Self::new(seed, repetition)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// `true` with probability `p`. Always consumes exactly one draw.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform angle in `[0, 2π)`.
    pub fn angle(&mut self) -> f64 {
        self.uniform() * TAU
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
