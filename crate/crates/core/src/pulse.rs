//! Pulse shaping.
//!
//! A [`PulseShape`] holds the `2ML+1` prototype taps centered at index `ML`.
//! Its [`EffectiveResponse`] is the length-`NL` circular placement of the
//! prototype with the center tap at index 0 (first column of the periodic
//! shaping matrix). Shaping one symbol is circular convolution of the
//! `L`-fold upsampled body with that response; shaping a whole GPS frame is
//! linear convolution with the prototype.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::fft::cis_ratio;
use crate::{ComplexSignal, Error, Result};

/// Finite-tap real prototype filter with unit energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseShape {
    taps: Vec<f64>,
    half_width: usize,
    oversampling: usize,
    rolloff: Option<f64>,
}

impl PulseShape {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Half-width `M` in symbol periods.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    /// Roll-off of an RRC pulse, `None` for the unit pulse.
    pub fn rolloff(&self) -> Option<f64> {
        self.rolloff
    }

    pub fn center(&self) -> usize {
        self.half_width * self.oversampling
    }

    pub fn is_rect(&self) -> bool {
        self.rolloff.is_none()
    }
}

/// Root-raised-cosine impulse response at `t` symbol periods.
fn rrc(t: f64, alpha: f64) -> f64 {
    if t == 0.0 {
        return 1.0 - alpha + 4.0 * alpha / PI;
    }
    if alpha > 0.0 && (1.0 - (4.0 * alpha * t).powi(2)).abs() < 1e-12 {
        let a = PI / (4.0 * alpha);
        return alpha / SQRT_2 * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * t * (1.0 - alpha)).sin() + 4.0 * alpha * t * (PI * t * (1.0 + alpha)).cos();
    num / (PI * t * (1.0 - (4.0 * alpha * t).powi(2)))
}

/// `2ML+1` samples of the RRC pulse at `L` samples per symbol, normalized
/// to unit energy after truncation.
pub fn rrc_taps(m: usize, l: usize, rolloff: f64) -> Result<PulseShape> {
    if m == 0 || l == 0 {
        return Err(Error::Config(format!("RRC needs M >= 1 and L >= 1, got M = {m}, L = {l}")));
    }
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::Config(format!("roll-off {rolloff} outside [0, 1]")));
    }
    let center = m * l;
    let mut taps = vec![0.0; 2 * center + 1];
    for k in 0..=center {
        let t = (center - k) as f64 / l as f64;
        let v = rrc(t, rolloff);
        taps[k] = v;
        taps[2 * center - k] = v;
    }
    let norm = taps.iter().map(|v| v * v).sum::<f64>().sqrt();
    taps.iter_mut().for_each(|v| *v /= norm);
    Ok(PulseShape { taps, half_width: m, oversampling: l, rolloff: Some(rolloff) })
}

/// Single unit tap at the center; with `L = 1` shaping is the identity.
pub fn rect_pulse(m: usize, l: usize) -> Result<PulseShape> {
    if l == 0 {
        return Err(Error::Config("L must be >= 1".into()));
    }
    let mut taps = vec![0.0; 2 * m * l + 1];
    taps[m * l] = 1.0;
    Ok(PulseShape { taps, half_width: m, oversampling: l, rolloff: None })
}

/// Circular pulse response `g` of length `NL`, center tap at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveResponse {
    g: Vec<f64>,
    n: usize,
    oversampling: usize,
    /// `(index, value)` of the nonzero entries.
    support: Vec<(usize, f64)>,
}

/// Places the prototype on a circle of `N·L` samples.
pub fn effective_response(ps: &PulseShape, n: usize) -> Result<EffectiveResponse> {
    let l = ps.oversampling;
    let nl = n * l;
    if nl < ps.taps.len() {
        return Err(Error::Config(format!(
            "pulse longer than frame: 2ML+1 = {} taps exceed NL = {nl}",
            ps.taps.len()
        )));
    }
    let center = ps.center() as i64;
    let mut g = vec![0.0; nl];
    for (k, &v) in ps.taps.iter().enumerate() {
        g[crate::wrap(k as i64 - center, nl)] = v;
    }
    let support = g.iter().copied().enumerate().filter(|&(_, v)| v != 0.0).collect();
    Ok(EffectiveResponse { g, n, oversampling: l, support })
}

impl EffectiveResponse {
    pub fn as_slice(&self) -> &[f64] {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn at(&self, i: i64) -> f64 {
        self.g[crate::wrap(i, self.g.len())]
    }

    /// Largest circular distance of a nonzero tap from index 0.
    pub fn reach(&self) -> usize {
        let nl = self.g.len();
        self.support.iter().map(|&(m, _)| m.min(nl - m)).max().unwrap_or(0)
    }

    /// Periodic autocorrelation `R_g(τ) = Σ_m g_m g_{<m-τ>}`.
    pub fn pacf(&self, tau: i64) -> f64 {
        self.support.iter().map(|&(m, v)| v * self.at(m as i64 - tau)).sum()
    }

    /// Spectrum of the squared envelope, `Σ_m |g_m|² e^{-j2πνm/(NL)}`.
    pub fn sse(&self, nu: f64) -> Complex64 {
        let nl = self.g.len() as f64;
        self.support
            .iter()
            .map(|&(m, v)| Complex64::from_polar(v * v, -2.0 * PI * nu * m as f64 / nl))
            .sum()
    }

    /// Ambiguity function of the pulse,
    /// `χ_g(τ, ν) = Σ_m g_m g_{<m-τ>} e^{-j2πνm/(NL)}`.
    pub fn dpaf(&self, tau: i64, nu: f64) -> Complex64 {
        let nl = self.g.len() as f64;
        self.support
            .iter()
            .filter_map(|&(m, v)| {
                let w = self.at(m as i64 - tau);
                (w != 0.0).then(|| Complex64::from_polar(v * w, -2.0 * PI * nu * m as f64 / nl))
            })
            .sum()
    }

    /// [`Self::dpaf`] at integer Doppler with exact phase reduction.
    pub fn dpaf_int(&self, tau: i64, nu: i64) -> Complex64 {
        let nl = self.g.len();
        self.support
            .iter()
            .filter_map(|&(m, v)| {
                let w = self.at(m as i64 - tau);
                (w != 0.0).then(|| cis_ratio(-nu * m as i64, nl) * (v * w))
            })
            .sum()
    }

    /// Pulse-shaped symbol `x_ps[i] = Σ_n g_{<i-nL>} x_n`, i.e. the periodic
    /// shaping matrix applied to the upsampled body.
    pub fn shape(&self, x: &[Complex64]) -> Result<ComplexSignal> {
        if x.len() != self.n {
            return Err(Error::Dimension { what: "shaped symbol body", expected: self.n, got: x.len() });
        }
        let nl = self.g.len();
        let mut out = vec![Complex64::new(0.0, 0.0); nl];
        for (n, &xn) in x.iter().enumerate() {
            let base = n * self.oversampling;
            for &(j, v) in &self.support {
                out[(base + j) % nl] += xn * v;
            }
        }
        Ok(ComplexSignal::from_vec(out))
    }
}

/// Inserts `L-1` zeros after every sample.
pub fn upsample(x: &[Complex64], l: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); x.len() * l];
    for (i, &v) in x.iter().enumerate() {
        out[i * l] = v;
    }
    out
}

/// Full linear convolution of the `L`-fold upsampled `x` with the prototype
/// (the aperiodic shaping matrix), `(len(x) + 2M)·L` output samples.
pub fn filter_aperiodic(ps: &PulseShape, x: &[Complex64]) -> Vec<Complex64> {
    let l = ps.oversampling;
    let out_len = (x.len() + 2 * ps.half_width) * l;
    let mut out = vec![Complex64::new(0.0, 0.0); out_len];
    for (i, &v) in x.iter().enumerate() {
        let base = i * l;
        for (k, &t) in ps.taps.iter().enumerate() {
            out[base + k] += v * t;
        }
    }
    out
}
