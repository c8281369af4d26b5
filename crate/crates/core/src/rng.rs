//! Seeded standard-normal streams, one independent substream per trajectory.
//!
//! A stream is keyed by `(seed, stream_index)`. Both are folded through a
//! SplitMix64 finalizer into a 256-bit ChaCha8 key, so streams can be built in
//! any order (or in parallel) and always reproduce the same draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}

/// Anything that yields independent N(0, 1) draws.
///
/// The simulator is generic over this so tests can inject fixed draws.
pub trait NormalSource {
    fn next_normal(&mut self) -> f64;

    fn fill_normals(&mut self, out: &mut [f64]) {
        for slot in out {
            *slot = self.next_normal();
        }
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_key(seed: Seed, stream_index: u64) -> [u8; 32] {
    let mut state = seed.0;
    let a = splitmix64(&mut state);
    let mut state = a ^ stream_index.wrapping_mul(GOLDEN_GAMMA).rotate_left(17);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Deterministic N(0, 1) stream for trajectory `stream_index` under `seed`.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    seed: Seed,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl GaussianStream {
    pub fn new(seed: Seed, stream_index: u64) -> Self {
        Self {
            seed,
            stream_index,
            rng: ChaCha8Rng::from_seed(stream_key(seed, stream_index)),
        }
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Next `count` draws from this stream.
    pub fn draw(&mut self, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::invalid("count must be >= 1"));
        }
        Ok((0..count).map(|_| self.next_normal()).collect())
    }
}

impl NormalSource for GaussianStream {
    fn next_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// First `count` draws of stream `(seed, stream_index)`.
pub fn draw_standard_normals(seed: Seed, stream_index: u64, count: usize) -> Result<Vec<f64>> {
    GaussianStream::new(seed, stream_index).draw(count)
}
