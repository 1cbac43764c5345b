//! Fixtures shared by the benchmarks.

use polarlab_core::construction::{frozen_count_for_rate, select_frozen, z_profile_bec};
use polarlab_core::{BinaryInputChannel, CodeSpec, TransformSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A rate-`rate` code over a BSC(`d`) metric, frozen by the BEC(1/2) profile
/// so that setup stays cheap at large `n`.
pub fn bsc_code(n: u32, rate: f64, d: f64) -> CodeSpec {
    let t = TransformSpec::new(n).unwrap();
    let z = z_profile_bec(0.5, n).unwrap().z;
    let frozen = select_frozen(&z, frozen_count_for_rate(t.len(), rate).unwrap()).unwrap();
    CodeSpec::zero_frozen(t, frozen, BinaryInputChannel::bsc(d).unwrap()).unwrap()
}

/// Uniform binary word of length `len`.
pub fn random_word(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(0..2)).collect()
}
