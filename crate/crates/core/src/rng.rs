//! Deterministic per-realization random streams.
//!
//! Every realization owns independent streams for circuit gates, disorder,
//! trajectories and the initial state, derived from the master seed alone.
//! Results therefore do not depend on how realizations are scheduled across
//! threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    Gates,
    Disorder,
    Trajectory,
    Initial,
    NoiseMask,
}

impl Stage {
    fn tag(self) -> u64 {
        match self {
            Stage::Gates => 0x6761_7465,
            Stage::Disorder => 0x6469_736f,
            Stage::Trajectory => 0x7472_616a,
            Stage::Initial => 0x696e_6974,
            Stage::NoiseMask => 0x6d61_736b,
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_seed(master: u64, realization: u64, stage: Stage) -> u64 {
    mix64(mix64(mix64(master) ^ realization) ^ stage.tag())
}

/// Child seed for the `index`-th sub-stream of `seed`, e.g. one per grid point.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x5eed)))
}

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(master: u64, realization: u64, stage: Stage) -> StreamRng {
    rng_from_seed(stream_seed(master, realization, stage))
}
