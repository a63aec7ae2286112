//! Seeded random streams.
//!
//! Everything random in the crate is driven by ChaCha8 keyed with an explicit
//! 64-bit seed. Independent sub-streams (per block, per grid point, per
//! bisection probe) are selected with the ChaCha stream word, so results do
//! not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `seed` on stream 0.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for `seed` on an explicit stream.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs two indices into one stream id.
pub fn stream2(seed: u64, major: u32, minor: u32) -> Rng {
    stream(seed, (u64::from(major) << 32) | u64::from(minor))
}
