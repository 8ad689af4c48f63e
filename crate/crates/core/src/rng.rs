//! Counter-based random substreams.
//!
//! Every Monte Carlo trial draws from its own ChaCha stream addressed by
//! `(master seed, grid index, trial index, purpose)`, so results do not depend
//! on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for. Independent purposes never share bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    Noise = 0,
    Messages = 1,
    Analog = 2,
    Fading = 3,
    Code = 4,
}

const PURPOSES: u64 = 8;

/// Root of a deterministic stream hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    master: u64,
}

impl SeedTree {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Stream for one trial at one grid point.
    pub fn stream(&self, grid: u64, trial: u64, purpose: Purpose) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix(self.master ^ splitmix(grid)));
        rng.set_stream(trial.wrapping_mul(PURPOSES) + purpose as u64);
        rng
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
