//! Seed derivation.
//!
//! Each random stream is a ChaCha8 generator keyed by a SplitMix64 hash of a
//! path of integers (master seed, trial, role, machine, ...). A stream's draws
//! never depend on how much another stream consumed, so fixing every stream
//! but one and replaying is exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub mod tag {
    pub const TRIAL: u64 = 1;
    pub const TAU: u64 = 2;
    pub const GUESS: u64 = 3;
    pub const COIN: u64 = 4;
    pub const AGENT: u64 = 5;
    pub const LEVEL: u64 = 6;
    pub const INNER: u64 = 7;
    pub const GEN: u64 = 8;
    pub const PHASE: u64 = 9;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn child(self, x: u64) -> Seed {
        Seed(splitmix(self.0 ^ splitmix(x)))
    }

    pub fn at(self, role: u64, idx: u64) -> Seed {
        self.child(role).child(idx)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    pub fn coin(self) -> bool {
        self.rng().gen::<bool>()
    }

    pub fn unit(self) -> f64 {
        self.rng().gen::<f64>()
    }
}
