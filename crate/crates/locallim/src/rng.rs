//! Counter-based random streams: a 64-bit master seed plus a stream index
//! address an independent ChaCha stream, so replicate i of an experiment can
//! use stream i regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream index used for Monte Carlo reference distributions.
pub const STREAM_REFERENCE: u64 = 1 << 48;
/// Stream index used for standalone root draws.
pub const STREAM_ROOT_DRAWS: u64 = (1 << 48) + 1;

#[derive(Debug, Clone)]
pub struct RngState {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl RngState {
    /// Deterministic, collision-free mapping from (master seed, stream index)
    /// to an independent generator.
    pub fn derive(master_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream);
        RngState {
            rng,
            seed: master_seed,
            stream,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
