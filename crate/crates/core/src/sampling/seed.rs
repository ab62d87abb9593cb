use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive mix of two words into a new seed.
#[inline]
pub fn mix64(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.rotate_left(17) ^ GOLDEN)
}

/// What a derived random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Sample,
    Boundary,
    Property(u64),
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Sample => 0x5A4D_504C,
            Purpose::Boundary => 0x424F_554E,
            Purpose::Property(k) => mix64(0x5052_4F50, k),
        }
    }
}

/// Master seed plus deterministic derivation of child seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(u64);

impl Seed {
    pub const fn new(master: u64) -> Self {
        Seed(master)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Child seed for `(cell, replicate, purpose)`. Pure integer arithmetic, so
    /// identical on every platform.
    pub fn derive(self, cell: u64, replicate: u64, purpose: Purpose) -> Seed {
        Seed(mix64(mix64(mix64(self.0, cell), replicate), purpose.tag()))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}
