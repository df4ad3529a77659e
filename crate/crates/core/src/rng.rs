//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! keyed by a base seed plus a task path, so parallel work is reproducible
//! independent of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Mix a base seed with a sequence of task indices.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &i| splitmix64(acc ^ splitmix64(i)))
}

pub fn task_rng(base: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, path))
}

// Stream tags keep unrelated consumers of one seed apart.
pub(crate) const STREAM_KMEANS: u64 = 0x6b6d;
pub(crate) const STREAM_PERMUTE: u64 = 0x7065;
pub(crate) const STREAM_SAMPLE: u64 = 0x7361;
pub(crate) const STREAM_SHUFFLE: u64 = 0x7368;
pub(crate) const STREAM_REPLICATE: u64 = 0x7265;
