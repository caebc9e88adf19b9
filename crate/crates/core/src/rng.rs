//! Seeded random streams.
//!
//! Every random draw in the crate comes from [`Rng`], ChaCha8 seeded through
//! `seed_from_u64`. Its output stream is fixed by the algorithm, so a seed
//! reproduces the same graph or sample on any platform.
//!
//! Sub-seeds are derived with [`derive_seed`]: the master seed and a path of
//! indices are folded through the SplitMix64 finalizer. Replication `i`,
//! bootstrap `j` of a run is therefore recomputable on its own.

use rand::SeedableRng;

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a seed from `master` and an index path.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(master), |acc, &p| mix64(acc ^ mix64(p.wrapping_add(0x632B_E59B_D9B4_E019))))
}

/// Index drawn with probability proportional to `weights`.
///
/// Weights must be non-negative; returns `None` when they sum to zero.
pub fn pick_weighted(rng: &mut Rng, weights: &[f64]) -> Option<usize> {
    use rand::Rng as _;
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = Some(i);
            if target < acc {
                return Some(i);
            }
        }
    }
    last
}

/// Stream tags used as the second path element.
pub mod stream {
    pub const GRAPH: u64 = 1;
    pub const ORDERING: u64 = 2;
    pub const SAMPLE: u64 = 3;
    pub const BOOTSTRAP: u64 = 4;
    pub const TRIAL: u64 = 5;
}
