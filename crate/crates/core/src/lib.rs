//! Waveform, ambiguity-function and delay-Doppler sensing primitives for
//! affine frequency division multiplexing (AFDM) and its OFDM/OCDM special
//! cases under pulse-shaped random data.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is deterministic
//! given a seed; parallel drivers live in the companion `afdm` crate and are
//! built on the per-trial entry points exposed here.
//!
//! Module map:
//!
//! - [`constellation`]: unit-power PSK/QAM alphabets, kurtosis, seeded draws.
//! - [`frame`]: IDAFT/DAFT, chirp-periodic prefix, guard prefix/suffix, frames.
//! - [`pulse`]: finite-tap RRC prototype, effective periodic response, PACF,
//!   squared-envelope spectrum and pulse ambiguity function.
//! - [`ambiguity`]: per-realization DPAF, Monte Carlo averages and the
//!   closed-form average squared DPAF with and without pulse shaping.
//! - [`channel`]: point-target echo synthesis with Swerling fluctuation.
//! - [`receiver`]: matched filter, noncoherent integration, ML estimation and
//!   the velocity RMSE harness.
//! - [`guideline`]: forbidden chirp parameters for strong/weak target pairs.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ambiguity;
pub mod channel;
pub mod constellation;
mod error;
pub mod fft;
pub mod frame;
pub mod guideline;
pub mod pulse;
pub mod receiver;
pub mod rng;
mod signal;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use signal::ComplexSignal;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Non-negative remainder of `a` modulo `m` for `m > 0`.
#[inline]
pub(crate) fn wrap(a: i64, m: usize) -> usize {
    a.rem_euclid(m as i64) as usize
}
