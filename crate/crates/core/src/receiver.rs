//! Matched filtering, noncoherent integration and ML estimation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::ambiguity::{CrossAmbiguity, DelayDopplerGrid};
use crate::channel::{normalized_params, shaped_symbols, synthesize_echo, RadioConfig, Target};
use crate::frame::{build_frame, AfdmConfig, SymbolBlock};
use crate::pulse::PulseShape;
use crate::rng::{trial_rng, Purpose};
use crate::{Error, Result};

/// Noncoherently integrated `r(τ, ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeDopplerMap {
    pub grid: DelayDopplerGrid,
    /// Row-major, delay-major.
    pub values: Vec<f64>,
    /// Number of symbols averaged.
    pub integrated: usize,
}

impl RangeDopplerMap {
    pub fn value(&self, delay_idx: usize, doppler_idx: usize) -> f64 {
        self.values[self.grid.index(delay_idx, doppler_idx)]
    }
}

/// Matched filter evaluated on a fixed grid, reusable across symbols.
pub struct MatchedFilter {
    grid: DelayDopplerGrid,
    kernel: CrossAmbiguity,
}

impl MatchedFilter {
    pub fn new(grid: &DelayDopplerGrid, nl: usize) -> Result<Self> {
        Ok(Self { grid: grid.clone(), kernel: CrossAmbiguity::new(grid, nl)? })
    }

    pub fn grid(&self) -> &DelayDopplerGrid {
        &self.grid
    }

    /// `r̃(τ, ν) = Σ_n y[n] x*[<n-τ>] e^{-j2πνn/(NL)}` over the grid.
    pub fn apply(&self, y: &[Complex64], x_ps: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.kernel.cells()];
        self.kernel.eval(y, x_ps, &mut out)?;
        Ok(out)
    }

    /// Mean of `|r̃_k|²` over the symbol pairs.
    pub fn integrate<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a [Complex64], &'a [Complex64])>,
    ) -> Result<RangeDopplerMap> {
        let cells = self.kernel.cells();
        let mut buf = vec![Complex64::new(0.0, 0.0); cells];
        let mut acc = vec![0.0; cells];
        let mut count = 0usize;
        for (y, x) in pairs {
            self.kernel.eval(y, x, &mut buf)?;
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += b.norm_sqr();
            }
            count += 1;
        }
        if count == 0 {
            return Err(Error::Config("no symbols to integrate".into()));
        }
        for a in acc.iter_mut() {
            *a /= count as f64;
        }
        Ok(RangeDopplerMap { grid: self.grid.clone(), values: acc, integrated: count })
    }
}

/// One-shot matched filter of a received symbol against its reference.
pub fn matched_filter(y: &[Complex64], x_ps: &[Complex64], grid: &DelayDopplerGrid) -> Result<Vec<Complex64>> {
    MatchedFilter::new(grid, x_ps.len())?.apply(y, x_ps)
}

/// Square-law noncoherent integration `(1/N_sym) Σ_k |r̃_k|²`.
pub fn noncoherent_integrate(grid: &DelayDopplerGrid, maps: &[Vec<Complex64>]) -> Result<RangeDopplerMap> {
    if maps.is_empty() {
        return Err(Error::Config("no matched-filter outputs to integrate".into()));
    }
    let cells = grid.len();
    let mut values = vec![0.0; cells];
    for m in maps {
        if m.len() != cells {
            return Err(Error::Dimension { what: "matched-filter map", expected: cells, got: m.len() });
        }
        for (v, c) in values.iter_mut().zip(m) {
            *v += c.norm_sqr();
        }
    }
    let k = maps.len() as f64;
    values.iter_mut().for_each(|v| *v /= k);
    Ok(RangeDopplerMap { grid: grid.clone(), values, integrated: maps.len() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlEstimate {
    pub tau: i64,
    /// Grid Doppler, refined by interpolation when requested.
    pub nu: f64,
    pub peak: f64,
    pub delay_idx: usize,
    pub doppler_idx: usize,
}

/// Grid argmax; ties go to the smallest delay, then the smallest Doppler.
/// With `interpolate`, a 3-point parabola refines `ν` around an interior peak.
pub fn ml_estimate(map: &RangeDopplerMap, interpolate: bool) -> Result<MlEstimate> {
    if map.values.is_empty() {
        return Err(Error::Config("empty search grid".into()));
    }
    let nd = map.grid.dopplers().len();
    let mut best = 0;
    for (i, &v) in map.values.iter().enumerate() {
        if v > map.values[best] {
            best = i;
        }
    }
    let (di, dj) = (best / nd, best % nd);
    let dopplers = map.grid.dopplers();
    let mut nu = dopplers[dj];
    if interpolate && dj > 0 && dj + 1 < nd {
        let (a, b, c) = (map.value(di, dj - 1), map.value(di, dj), map.value(di, dj + 1));
        let curv = a - 2.0 * b + c;
        if curv < 0.0 {
            let delta = (0.5 * (a - c) / curv).clamp(-0.5, 0.5);
            let step = if delta >= 0.0 { dopplers[dj + 1] - nu } else { nu - dopplers[dj - 1] };
            nu += delta * step;
        }
    }
    Ok(MlEstimate { tau: map.grid.delays()[di], nu, peak: map.values[best], delay_idx: di, doppler_idx: dj })
}

/// Targets, the index of the one whose velocity is estimated, and the radio.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub targets: Vec<Target>,
    pub weak_index: usize,
    /// Carrier and spacing; the SNR is set per experiment point.
    pub radio: RadioConfig,
}

impl Scenario {
    pub fn new(targets: Vec<Target>, weak_index: usize, radio: RadioConfig) -> Result<Self> {
        if weak_index >= targets.len() {
            return Err(Error::Scenario(format!(
                "weak target index {weak_index} out of range for {} targets",
                targets.len()
            )));
        }
        Ok(Self { targets, weak_index, radio })
    }
}

/// Search window around the known weak-target cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchWindow {
    /// Half-width in Doppler units.
    pub half_width: f64,
    pub step: f64,
    pub interpolate: bool,
}

impl Default for SearchWindow {
    fn default() -> Self {
        Self { half_width: 2.0, step: 0.125, interpolate: true }
    }
}

impl SearchWindow {
    /// Grid at the weak target's delay, `ν_w ± half_width`.
    pub fn grid(&self, tau: i64, nu: f64) -> Result<DelayDopplerGrid> {
        DelayDopplerGrid::with_doppler_step(vec![tau], nu - self.half_width, nu + self.half_width, self.step)
    }
}

/// Velocity error (estimate minus truth, m/s) of the weak target in one trial.
pub fn rmse_trial(
    cfg: &AfdmConfig,
    ps: &PulseShape,
    scenario: &Scenario,
    snr_db: Option<f64>,
    window: &SearchWindow,
    seed: u64,
    trial: u64,
) -> Result<f64> {
    let radio = RadioConfig { snr_db, ..scenario.radio };
    let block = SymbolBlock::random(cfg, &mut trial_rng(seed, trial, Purpose::Data));
    let frame = build_frame(cfg, &block)?;
    let refs = shaped_symbols(cfg, ps, &block)?;
    let echo = synthesize_echo(&frame, cfg, ps, &scenario.targets, &radio, seed, trial)?;
    let weak = normalized_params(&scenario.targets[scenario.weak_index], &radio, cfg);
    let mf = MatchedFilter::new(&window.grid(weak.tau, weak.nu)?, cfg.body_len())?;
    let map = mf.integrate(echo.columns.iter().map(|c| &c[..]).zip(refs.iter().map(|x| &x[..])))?;
    let est = ml_estimate(&map, window.interpolate)?;
    let v = radio.velocity_per_doppler();
    Ok(est.nu * v - scenario.targets[scenario.weak_index].velocity_mps)
}

/// Root-mean-square of per-trial velocity errors.
pub fn rmse(errors: &[f64]) -> f64 {
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len().max(1) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub waveform: String,
    pub two_n_c1: u32,
    pub snr_db: f64,
    pub rmse_mps: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Weak-target velocity RMSE for every waveform and SNR, sequentially.
/// Trial `t` uses the same data, fluctuation and noise draws for every
/// waveform.
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
            let errors = (0..trials)
                .map(|t| rmse_trial(cfg, ps, scenario, Some(snr), window, seed, t))
                .collect::<Result<Vec<f64>>>()?;
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
