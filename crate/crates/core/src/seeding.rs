//! Reproducible seed derivation.
//!
//! Every random draw in an experiment comes from a ChaCha8 generator seeded
//! with `derive_seed(master, stream, index)`, where `stream` names the
//! consumer (channel draw, perturbation, analog initialization) and `index`
//! is the Monte-Carlo realization. Results therefore do not depend on how
//! realizations are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Channel = 1,
    Perturbation = 2,
    AnalogInit = 3,
    Oracle = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let a = splitmix64(master ^ splitmix64(stream as u64));
    splitmix64(a ^ splitmix64(index.wrapping_add(0xA5A5_A5A5)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
