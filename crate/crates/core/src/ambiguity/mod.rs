//! Discrete periodic ambiguity function (DPAF).
//!
//! `χ(τ, ν) = Σ_{n<NL} x[n] x*[<n-τ>_{NL}] e^{-j2πνn/(NL)}` is computed per
//! realization ([`dpaf_realization`], [`CrossAmbiguity`]), averaged over random
//! data ([`monte_carlo`]) and evaluated in closed form ([`theory`]).

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::fft::{self, cis_ratio, cis_turns};
use crate::{Error, Result};

pub mod monte_carlo;
pub mod theory;

pub use monte_carlo::{dpaf_monte_carlo, MomentAccumulator, MonteCarloDpaf};
pub use theory::{
    delay_cut_ps, delay_cut_terms, dirichlet_sq, doppler_cut_ps, doppler_cut_terms, dpaf_theory_nops,
    dpaf_theory_ocdm, dpaf_theory_ofdm, dpaf_theory_ps, find_depressions, mainlobe_nops, mainlobe_ps,
    theory_grid, DepressionMap,
};

/// Delay (integer samples) and Doppler (normalized, possibly fractional) axes.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayDopplerGrid {
    delays: Vec<i64>,
    dopplers: Vec<f64>,
}

impl DelayDopplerGrid {
    /// Both axes must be nonempty, finite and strictly increasing.
    pub fn new(delays: Vec<i64>, dopplers: Vec<f64>) -> Result<Self> {
        if delays.is_empty() || dopplers.is_empty() {
            return Err(Error::Config("delay and Doppler axes must be nonempty".into()));
        }
        if delays.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("delay axis must be strictly increasing".into()));
        }
        if dopplers.iter().any(|v| !v.is_finite()) || dopplers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("Doppler axis must be finite and strictly increasing".into()));
        }
        Ok(Self { delays, dopplers })
    }

    /// Integer grid over the inclusive ranges.
    pub fn integer(delays: core::ops::RangeInclusive<i64>, dopplers: core::ops::RangeInclusive<i64>) -> Result<Self> {
        Self::new(delays.collect(), dopplers.map(|v| v as f64).collect())
    }

    /// Doppler axis `lo, lo+step, ...` up to `hi` (inclusive within 1e-9 steps).
    pub fn with_doppler_step(delays: Vec<i64>, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi >= lo) {
            return Err(Error::Config(format!("invalid Doppler range [{lo}, {hi}] step {step}")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        Self::new(delays, (0..count).map(|i| lo + i as f64 * step).collect())
    }

    pub fn delays(&self) -> &[i64] {
        &self.delays
    }

    pub fn dopplers(&self) -> &[f64] {
        &self.dopplers
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.delays.len() * self.dopplers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_integer_doppler(&self) -> bool {
        self.dopplers.iter().all(|v| v.fract() == 0.0)
    }

    /// Row-major cell index.
    pub fn index(&self, delay_idx: usize, doppler_idx: usize) -> usize {
        delay_idx * self.dopplers.len() + doppler_idx
    }

    /// Cells as `(τ, ν)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.delays.iter().flat_map(move |&t| self.dopplers.iter().map(move |&v| (t, v)))
    }

    /// Rejects delays outside `(-NL, NL)`.
    pub fn check_delay_span(&self, nl: usize) -> Result<()> {
        let (lo, hi) = (self.delays[0], *self.delays.last().unwrap());
        if lo <= -(nl as i64) || hi >= nl as i64 {
            return Err(Error::Config(format!("delay axis [{lo}, {hi}] exceeds one period NL = {nl}")));
        }
        Ok(())
    }
}

/// How [`DpafGrid`] values are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Absolute,
    /// `10 log10(value / mainlobe)`.
    MainlobeDb,
}

/// Surface of (average) squared DPAF values over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DpafGrid {
    pub grid: DelayDopplerGrid,
    /// Row-major, delay-major.
    pub values: Vec<f64>,
    /// Monte Carlo standard error per cell, when available.
    pub stderr: Option<Vec<f64>>,
    pub normalization: Normalization,
    /// Set when a closed form was evaluated outside its exact domain
    /// (fractional Doppler with pulse shaping).
    pub approximate: bool,
    pub trials: Option<u64>,
}

impl DpafGrid {
    pub fn value(&self, delay_idx: usize, doppler_idx: usize) -> f64 {
        self.values[self.grid.index(delay_idx, doppler_idx)]
    }

    /// Value at grid coordinates, if present.
    pub fn at(&self, tau: i64, nu: f64) -> Option<f64> {
        let i = self.grid.delays.iter().position(|&t| t == tau)?;
        let j = self.grid.dopplers.iter().position(|&v| (v - nu).abs() < 1e-12)?;
        Some(self.value(i, j))
    }

    /// Converts absolute values to dB relative to `mainlobe`.
    pub fn to_db(&self, mainlobe: f64) -> DpafGrid {
        let db = |v: f64| 10.0 * (v.max(f64::MIN_POSITIVE) / mainlobe).log10();
        DpafGrid {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| db(v)).collect(),
            stderr: None,
            normalization: Normalization::MainlobeDb,
            approximate: self.approximate,
            trials: self.trials,
        }
    }
}

/// `Σ_n y[n] x*[<n-τ>] e^{-j2πνn/len}` at one cell.
pub fn cross_ambiguity(y: &[Complex64], x: &[Complex64], tau: i64, nu: f64) -> Complex64 {
    let len = y.len();
    debug_assert_eq!(len, x.len());
    let int_nu = nu.fract() == 0.0;
    (0..len)
        .map(|n| {
            let w = if int_nu {
                cis_ratio(-(nu as i64) * n as i64, len)
            } else {
                cis_turns(-nu * n as f64 / len as f64)
            };
            y[n] * x[crate::wrap(n as i64 - tau, len)].conj() * w
        })
        .sum()
}

/// DPAF of one pulse-shaped realization at `(τ, ν)`; `τ` wraps modulo `NL`.
pub fn dpaf_realization(x_ps: &[Complex64], tau: i64, nu: f64) -> Complex64 {
    cross_ambiguity(x_ps, x_ps, tau, nu)
}

enum Kernel {
    /// One FFT per delay, then bin lookup.
    Fft { bins: Vec<usize> },
    /// Precomputed `e^{-j2πνn/len}` rows, one per Doppler value.
    Direct { twiddles: Vec<Complex64> },
}

/// Grid evaluator for `Σ_n y[n] x*[<n-τ>] e^{-j2πνn/len}`, reused across
/// realizations.
pub struct CrossAmbiguity {
    len: usize,
    delays: Vec<usize>,
    n_doppler: usize,
    kernel: Kernel,
}

impl CrossAmbiguity {
    pub fn new(grid: &DelayDopplerGrid, len: usize) -> Result<Self> {
        grid.check_delay_span(len)?;
        let delays = grid.delays().iter().map(|&t| crate::wrap(t, len)).collect();
        let nd = grid.dopplers().len();
        let log2 = (usize::BITS - len.leading_zeros()) as usize;
        let kernel = if len.is_power_of_two() && grid.is_integer_doppler() && nd >= 2 * log2 {
            Kernel::Fft { bins: grid.dopplers().iter().map(|&v| crate::wrap(v as i64, len)).collect() }
        } else {
            let mut twiddles = Vec::with_capacity(nd * len);
            for &nu in grid.dopplers() {
                if nu.fract() == 0.0 {
                    twiddles.extend((0..len).map(|n| cis_ratio(-(nu as i64) * n as i64, len)));
                } else {
                    twiddles.extend((0..len).map(|n| cis_turns(-nu * n as f64 / len as f64)));
                }
            }
            Kernel::Direct { twiddles }
        };
        Ok(Self { len, delays, n_doppler: nd, kernel })
    }

    pub fn signal_len(&self) -> usize {
        self.len
    }

    pub fn cells(&self) -> usize {
        self.delays.len() * self.n_doppler
    }

    /// Evaluates every cell of the grid, row-major, into `out`.
    pub fn eval(&self, y: &[Complex64], x: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        if y.len() != self.len || x.len() != self.len {
            return Err(Error::Dimension { what: "ambiguity input", expected: self.len, got: y.len().min(x.len()) });
        }
        if out.len() != self.cells() {
            return Err(Error::Dimension { what: "ambiguity output", expected: self.cells(), got: out.len() });
        }
        let len = self.len;
        let mut prod = alloc::vec![Complex64::new(0.0, 0.0); len];
        for (row, &tau) in self.delays.iter().enumerate() {
            for (n, p) in prod.iter_mut().enumerate() {
                let k = if n >= tau { n - tau } else { n + len - tau };
                *p = y[n] * x[k].conj();
            }
            let dst = &mut out[row * self.n_doppler..(row + 1) * self.n_doppler];
            match &self.kernel {
                Kernel::Fft { bins } => {
                    fft::forward(&mut prod);
                    for (d, &b) in dst.iter_mut().zip(bins) {
                        *d = prod[b];
                    }
                }
                Kernel::Direct { twiddles } => {
                    for (j, d) in dst.iter_mut().enumerate() {
                        let w = &twiddles[j * len..(j + 1) * len];
                        *d = prod.iter().zip(w).map(|(a, b)| a * b).sum();
                    }
                }
            }
        }
        Ok(())
    }

    /// `|χ|²` over the grid for the auto-ambiguity of `x`.
    pub fn eval_sq(&self, x: &[Complex64], out: &mut [f64]) -> Result<()> {
        let mut tmp = alloc::vec![Complex64::new(0.0, 0.0); self.cells()];
        self.eval(x, x, &mut tmp)?;
        for (o, t) in out.iter_mut().zip(&tmp) {
            *o = t.norm_sqr();
        }
        Ok(())
    }
}
