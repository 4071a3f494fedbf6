//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! seeded from a `u64`, so identical seeds give bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes `base` and a stream index into an independent-looking seed
/// (splitmix64 finalizer), so nested derivations do not collide.
pub fn derive(base: u64, stream: u64) -> u64 {
    let mut z = base
        ^ stream
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
