//! Seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by the
//! experiment seed, with the ChaCha stream selected by (trial, purpose). Trials
//! are therefore independent of evaluation order and of thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Independent sub-stream selectors within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Data = 0,
    Fluctuation = 1,
    Noise = 2,
}

/// Generator for `seed` at stream 0.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for one `purpose` of one `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64, purpose: Purpose) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // 2^62 trials is far beyond any experiment here
    rng.set_stream((trial << 2) | purpose as u64);
    rng
}
