//! Shared helpers for the criterion benches.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rankcorr::rankstats::ConcomitantRanks;

/// Seeded random permutation of 1..=n.
pub fn random_ranks(n: usize, seed: u64) -> ConcomitantRanks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(&mut rng);
    ConcomitantRanks::new(perm).expect("permutation")
}
