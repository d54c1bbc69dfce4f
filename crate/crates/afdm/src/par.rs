//! Rayon versions of the Monte Carlo drivers.
//!
//! Trials are split into fixed chunks and the partial results merged in chunk
//! order, so output does not depend on the thread count.

use std::ops::Range;

use afdm_core::ambiguity::{DelayDopplerGrid, DpafGrid, MomentAccumulator, MonteCarloDpaf};
use afdm_core::frame::AfdmConfig;
use afdm_core::pulse::PulseShape;
use afdm_core::receiver::{rmse, rmse_trial, RmseRow, Scenario, SearchWindow};
use afdm_core::{Error, Result};
use rayon::prelude::*;

/// Trials per work item.
pub const CHUNK: u64 = 256;

fn chunks(trials: u64) -> Vec<Range<u64>> {
    (0..trials.div_ceil(CHUNK)).map(|c| c * CHUNK..((c + 1) * CHUNK).min(trials)).collect()
}

/// Moments of `|χ|²` over `trials` random symbols.
pub fn dpaf_moments(mc: &MonteCarloDpaf, trials: u64, seed: u64) -> Result<MomentAccumulator> {
    let parts = chunks(trials).into_par_iter().map(|r| mc.run(seed, r)).collect::<Result<Vec<_>>>()?;
    let mut acc = MomentAccumulator::new(mc.cells());
    for p in &parts {
        acc.merge(p);
    }
    Ok(acc)
}

/// Parallel counterpart of [`afdm_core::ambiguity::dpaf_monte_carlo`].
pub fn dpaf_monte_carlo(
    cfg: &AfdmConfig,
    ps: &PulseShape,
    grid: &DelayDopplerGrid,
    trials: u64,
    seed: u64,
) -> Result<DpafGrid> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mc = MonteCarloDpaf::new(cfg, ps, grid)?;
    let acc = dpaf_moments(&mc, trials, seed)?;
    Ok(mc.finish(&acc))
}

/// Per-trial weak-target velocity errors, in trial order.
pub fn velocity_errors(
    cfg: &AfdmConfig,
    ps: &PulseShape,
    scenario: &Scenario,
    snr_db: Option<f64>,
    window: &SearchWindow,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|t| rmse_trial(cfg, ps, scenario, snr_db, window, seed, t))
        .collect()
}

/// Parallel counterpart of [`afdm_core::receiver::rmse_experiment`].
pub fn rmse_experiment(
    scenario: &Scenario,
    waveforms: &[(String, AfdmConfig)],
    ps: &PulseShape,
    snr_list: &[f64],
    window: &SearchWindow,
    trials: u64,
    seed: u64,
) -> Result<Vec<RmseRow>> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for (name, cfg) in waveforms {
        for &snr in snr_list {
            let errors = velocity_errors(cfg, ps, scenario, Some(snr), window, trials, seed)?;
            rows.push(RmseRow {
                waveform: name.clone(),
                two_n_c1: cfg.two_n_c1(),
                snr_db: snr,
                rmse_mps: rmse(&errors),
                trials,
                seed,
            });
        }
    }
    Ok(rows)
}
