//! Deterministic per-task RNG streams.
//!
//! Every parallel unit of work (instance, sample) derives its own ChaCha
//! stream from the master seed and its index, so results are independent of
//! worker count and schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn instance_rng(master_seed: u64, instance_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(instance_index);
    rng
}
