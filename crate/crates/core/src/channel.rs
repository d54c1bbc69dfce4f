//! Point-target echo synthesis.
//!
//! The transmitted GPS frame is upsampled and linearly filtered with the
//! prototype pulse, then every target contributes an aperiodically delayed,
//! Doppler-rotated and fluctuating copy. After dropping the filter transition
//! and the guard/CPP segments, column `k` of the result holds the `NL`
//! samples of symbol `k`, which reduce to a periodic shift of the shaped
//! symbol as long as the delay stays within the CPP.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::fft::cis_turns;
use crate::frame::{idaft_modulate, AfdmConfig, SymbolBlock};
use crate::pulse::{effective_response, filter_aperiodic, PulseShape};
use crate::rng::{trial_rng, Purpose};
use crate::{ComplexSignal, Error, Result, SPEED_OF_LIGHT};

/// Reflection coefficient model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fluctuation {
    /// Constant `β̄`.
    Swerling0,
    /// `β_k ~ CN(0, β̄²)`, independent per symbol.
    Swerling2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub mean_amp: f64,
    pub fluctuation: Fluctuation,
}

impl Target {
    pub fn new(range_m: f64, velocity_mps: f64, mean_amp: f64, fluctuation: Fluctuation) -> Result<Self> {
        if !(range_m >= 0.0) || !range_m.is_finite() {
            return Err(Error::Scenario(format!("target range must be finite and >= 0, got {range_m}")));
        }
        if !velocity_mps.is_finite() {
            return Err(Error::Scenario("target velocity must be finite".into()));
        }
        if !(mean_amp >= 0.0) || !mean_amp.is_finite() {
            return Err(Error::Scenario(format!("target amplitude must be finite and >= 0, got {mean_amp}")));
        }
        Ok(Self { range_m, velocity_mps, mean_amp, fluctuation })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    pub carrier_hz: f64,
    pub subcarrier_spacing_hz: f64,
    /// Per-sample SNR of matrix `Y`; `None` disables noise.
    pub snr_db: Option<f64>,
}

impl RadioConfig {
    pub fn new(carrier_hz: f64, subcarrier_spacing_hz: f64, snr_db: Option<f64>) -> Result<Self> {
        if !(carrier_hz > 0.0) || !(subcarrier_spacing_hz > 0.0) {
            return Err(Error::Config("carrier and subcarrier spacing must be positive".into()));
        }
        if snr_db.is_some_and(|s| !s.is_finite()) {
            return Err(Error::Config("SNR must be finite".into()));
        }
        Ok(Self { carrier_hz, subcarrier_spacing_hz, snr_db })
    }

    /// Symbol-rate sample frequency `N·Δf`.
    pub fn sample_rate(&self, n: usize) -> f64 {
        n as f64 * self.subcarrier_spacing_hz
    }

    /// Velocity corresponding to one unit of normalized Doppler.
    pub fn velocity_per_doppler(&self) -> f64 {
        SPEED_OF_LIGHT * self.subcarrier_spacing_hz / (2.0 * self.carrier_hz)
    }

    /// Range corresponding to one sample at rate `L·N·Δf`.
    pub fn range_per_sample(&self, n: usize, l: usize) -> f64 {
        SPEED_OF_LIGHT / (2.0 * l as f64 * self.sample_rate(n))
    }
}

/// Normalized delay and Doppler of one target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    /// Round-trip delay in samples at rate `L·f_s`.
    pub tau: i64,
    /// `2 v f_c / (c Δf)`, not wrapped.
    pub nu: f64,
    /// Exact delay minus `tau`.
    pub tau_residual: f64,
}

pub fn normalized_params(target: &Target, radio: &RadioConfig, cfg: &AfdmConfig) -> PathParams {
    let fs = radio.sample_rate(cfg.n());
    let exact = 2.0 * target.range_m * cfg.oversampling() as f64 * fs / SPEED_OF_LIGHT;
    let tau = exact.round();
    let nu = 2.0 * target.velocity_mps * radio.carrier_hz * cfg.n() as f64 / (SPEED_OF_LIGHT * fs);
    PathParams { tau: tau as i64, nu, tau_residual: exact - tau }
}

/// Received `NL × N_sym` matrix with the draws that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoMatrix {
    /// One column of `NL` samples per symbol.
    pub columns: Vec<ComplexSignal>,
    pub paths: Vec<PathParams>,
    /// `betas[q][k]`.
    pub betas: Vec<Vec<Complex64>>,
    /// Complex noise variance per sample, 0 when noise is off.
    pub noise_variance: f64,
    /// Mean noise-free received power per sample the SNR refers to.
    pub signal_power: f64,
}

/// Pulse-shaped symbols `x_ps,k` used as matched-filter references.
pub fn shaped_symbols(cfg: &AfdmConfig, ps: &PulseShape, block: &SymbolBlock) -> Result<Vec<ComplexSignal>> {
    let g = effective_response(ps, cfg.n())?;
    (0..block.cols()).map(|k| g.shape(&idaft_modulate(cfg, block.column(k))?)).collect()
}

fn fluctuation_draws(targets: &[Target], n_sym: usize, seed: u64, trial: u64) -> Vec<Vec<Complex64>> {
    let mut rng = trial_rng(seed, trial, Purpose::Fluctuation);
    targets
        .iter()
        .map(|t| match t.fluctuation {
            Fluctuation::Swerling0 => vec![Complex64::new(t.mean_amp, 0.0); n_sym],
            Fluctuation::Swerling2 => {
                let s = t.mean_amp * core::f64::consts::FRAC_1_SQRT_2;
                (0..n_sym)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re * s, im * s)
                    })
                    .collect()
            }
        })
        .collect()
}

/// Circularly-symmetric Gaussian samples of variance `var`.
pub(crate) fn complex_noise<R: rand::Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Echo of the GPS `frame` from `targets`, after transition trimming and
/// guard/CPP removal. Noise is added per [`RadioConfig::snr_db`] relative to
/// `Σ_q β̄_q² · mean|x_ps|²`.
pub fn synthesize_echo(
    frame: &[Complex64],
    cfg: &AfdmConfig,
    ps: &PulseShape,
    targets: &[Target],
    radio: &RadioConfig,
    seed: u64,
    trial: u64,
) -> Result<EchoMatrix> {
    let (n, l, m, n_cp, n_sym) = (cfg.n(), cfg.oversampling(), cfg.guard(), cfg.n_cp(), cfg.n_sym());
    let p = cfg.symbol_len();
    if ps.oversampling() != l {
        return Err(Error::Config("pulse oversampling does not match the frame configuration".into()));
    }
    if ps.half_width() != m {
        return Err(Error::Config(format!("guard M = {m} differs from the pulse half-width {}", ps.half_width())));
    }
    if frame.len() != p * n_sym {
        return Err(Error::Dimension { what: "frame", expected: p * n_sym, got: frame.len() });
    }
    let paths: Vec<PathParams> = targets.iter().map(|t| normalized_params(t, radio, cfg)).collect();
    for (q, path) in paths.iter().enumerate() {
        if path.tau > (n_cp * l) as i64 {
            return Err(Error::Scenario(format!(
                "target {q}: delay {} samples exceeds the CPP span N_cp·L = {}",
                path.tau,
                n_cp * l
            )));
        }
    }
    let nl = n * l;
    let x_full = filter_aperiodic(ps, frame);
    // ML transition samples, then guard prefix and CPP
    let offset = |k: usize| (k * p + 2 * m + n_cp) * l;

    let signal_power = {
        let mean_x: f64 = (0..n_sym)
            .flat_map(|k| x_full[offset(k)..offset(k) + nl].iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            / (nl * n_sym) as f64;
        targets.iter().map(|t| t.mean_amp * t.mean_amp).sum::<f64>() * mean_x
    };

    let betas = fluctuation_draws(targets, n_sym, seed, trial);
    let mut columns: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); nl]; n_sym];
    for (q, path) in paths.iter().enumerate() {
        let tau = path.tau as usize;
        let rate = path.nu / nl as f64;
        for (k, col) in columns.iter_mut().enumerate() {
            let beta = betas[q][k];
            let start = offset(k);
            for (j, y) in col.iter_mut().enumerate() {
                // absolute snapshot index in the untrimmed echo
                let i = start + j;
                *y += beta * cis_turns(rate * i as f64) * x_full[i - tau];
            }
        }
    }

    let noise_variance = match radio.snr_db {
        Some(snr) => signal_power / 10f64.powf(snr / 10.0),
        None => 0.0,
    };
    if noise_variance > 0.0 {
        let mut rng = trial_rng(seed, trial, Purpose::Noise);
        for col in columns.iter_mut() {
            for y in col.iter_mut() {
                *y += complex_noise(&mut rng, noise_variance);
            }
        }
    }
    Ok(EchoMatrix {
        columns: columns.into_iter().map(ComplexSignal::from_vec).collect(),
        paths,
        betas,
        noise_variance,
        signal_power,
    })
}

/// Noise-free periodic model of one path: per symbol, a `τ`-sample periodic
/// shift of `x_ps,k` with fast-time, slow-time and leading Doppler phases.
pub fn periodic_echo(cfg: &AfdmConfig, x_ps: &[ComplexSignal], path: &PathParams, betas: &[Complex64]) -> Vec<ComplexSignal> {
    let nl = cfg.body_len();
    let l = cfg.oversampling();
    let lead = cis_turns(path.nu * ((cfg.n_cp() + 2 * cfg.guard()) * l) as f64 / nl as f64);
    x_ps.iter()
        .zip(betas)
        .enumerate()
        .map(|(k, (x, &beta))| {
            let slow = cis_turns(path.nu * (cfg.symbol_len() * l * k) as f64 / nl as f64);
            let c = beta * lead * slow;
            let v = (0..nl)
                .map(|n| c * x[crate::wrap(n as i64 - path.tau, nl)] * cis_turns(path.nu * n as f64 / nl as f64))
                .collect();
            ComplexSignal::from_vec(v)
        })
        .collect()
}
