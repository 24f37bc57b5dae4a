//! Named sub-stream seed derivation.
//!
//! Every run has one root seed; each consumer (fold split, model init,
//! bootstrap, synthesis) draws from a stream derived by name. Adding a new
//! consumer therefore never perturbs the draws of existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive the seed of the named sub-stream from the root seed.
pub fn derive_seed(root: u64, stream: &str) -> u64 {
    // FNV-1a over the stream name, mixed with the root through splitmix64.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(root ^ h)
}

/// Deterministic RNG for the named sub-stream.
pub fn stream_rng(root: u64, stream: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, stream))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
