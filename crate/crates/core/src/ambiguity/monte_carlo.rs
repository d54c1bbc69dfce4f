//! Monte Carlo average of the squared DPAF over random data.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use super::{CrossAmbiguity, DelayDopplerGrid, DpafGrid, Normalization};
use crate::constellation::draw_from;
use crate::frame::{idaft_modulate, AfdmConfig};
use crate::pulse::{effective_response, EffectiveResponse, PulseShape};
use crate::rng::{trial_rng, Purpose};
use crate::{Error, Result};

/// Per-cell running mean and sum of squared deviations (Welford), mergeable.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(cells: usize) -> Self {
        Self { count: 0, mean: vec![0.0; cells], m2: vec![0.0; cells] }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn cells(&self) -> usize {
        self.mean.len()
    }

    pub fn push(&mut self, sample: &[f64]) {
        debug_assert_eq!(sample.len(), self.mean.len());
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(sample) {
            let d = x - *m;
            *m += d / n;
            *s += d * (x - *m);
        }
    }

    /// Combines two disjoint sets of samples.
    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Unbiased sample variance per cell (0 with fewer than two samples).
    pub fn variance(&self) -> Vec<f64> {
        let denom = self.count.saturating_sub(1).max(1) as f64;
        self.m2.iter().map(|&s| s / denom).collect()
    }

    /// Standard error of the mean per cell.
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.count.max(1) as f64;
        self.variance().into_iter().map(|v| (v / n).sqrt()).collect()
    }
}

/// Prepared Monte Carlo DPAF experiment: one pulse-shaped symbol per trial.
pub struct MonteCarloDpaf {
    cfg: AfdmConfig,
    response: EffectiveResponse,
    points: Vec<Complex64>,
    kernel: CrossAmbiguity,
    grid: DelayDopplerGrid,
}

impl MonteCarloDpaf {
    /// Delays are at the oversampled rate and must lie in `(-NL, NL)`.
    pub fn new(cfg: &AfdmConfig, ps: &PulseShape, grid: &DelayDopplerGrid) -> Result<Self> {
        if ps.oversampling() != cfg.oversampling() {
            return Err(Error::Config("pulse oversampling does not match the frame configuration".into()));
        }
        let response = effective_response(ps, cfg.n())?;
        let kernel = CrossAmbiguity::new(grid, response.len())?;
        Ok(Self {
            cfg: cfg.clone(),
            response,
            points: cfg.constellation().points()?,
            kernel,
            grid: grid.clone(),
        })
    }

    pub fn cells(&self) -> usize {
        self.kernel.cells()
    }

    pub fn response(&self) -> &EffectiveResponse {
        &self.response
    }

    /// Squared DPAF of trial `trial` into `out`.
    pub fn trial(&self, seed: u64, trial: u64, out: &mut [f64]) -> Result<()> {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.cells()];
        self.trial_with(seed, trial, out, &mut scratch)
    }

    fn trial_with(&self, seed: u64, trial: u64, out: &mut [f64], scratch: &mut [Complex64]) -> Result<()> {
        let mut rng = trial_rng(seed, trial, Purpose::Data);
        let data = draw_from(&self.points, self.cfg.n(), &mut rng);
        let x = idaft_modulate(&self.cfg, &data)?;
        let x_ps = self.response.shape(&x)?;
        self.kernel.eval(&x_ps, &x_ps, scratch)?;
        for (o, s) in out.iter_mut().zip(scratch.iter()) {
            *o = s.norm_sqr();
        }
        Ok(())
    }

    /// Accumulates the trials in `trials`, in order.
    pub fn run(&self, seed: u64, trials: Range<u64>) -> Result<MomentAccumulator> {
        let cells = self.cells();
        let mut acc = MomentAccumulator::new(cells);
        let mut out = vec![0.0; cells];
        let mut scratch = vec![Complex64::new(0.0, 0.0); cells];
        for t in trials {
            self.trial_with(seed, t, &mut out, &mut scratch)?;
            acc.push(&out);
        }
        Ok(acc)
    }

    /// Packages accumulated moments as a grid with standard errors.
    pub fn finish(&self, acc: &MomentAccumulator) -> DpafGrid {
        DpafGrid {
            grid: self.grid.clone(),
            values: acc.mean().to_vec(),
            stderr: Some(acc.stderr()),
            normalization: Normalization::Absolute,
            approximate: false,
            trials: Some(acc.count()),
        }
    }
}

/// Mean of `|χ|²` over `trials` random symbols, sequentially.
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
    let acc = mc.run(seed, 0..trials)?;
    Ok(mc.finish(&acc))
}
