//! Closed-form average squared DPAF under i.i.d. unit-power data.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use super::{DelayDopplerGrid, DpafGrid, Normalization};
use crate::frame::AfdmConfig;
use crate::pulse::EffectiveResponse;
use crate::{Error, Result};

/// Squared Dirichlet kernel `|sin(πx) / sin(πx/N)|²`, equal to `N²` at
/// multiples of `N` and exactly 0 at other integers.
pub fn dirichlet_sq(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        return if (x as i64).rem_euclid(n as i64) == 0 { nf * nf } else { 0.0 };
    }
    let r = x - nf * (x / nf).round();
    let den = (PI * r / nf).sin();
    if den == 0.0 {
        return nf * nf;
    }
    let v = (PI * r).sin() / den;
    v * v
}

/// Peak level at the origin without pulse shaping: `N² + (μ4-1)N`.
pub fn mainlobe_nops(cfg: &AfdmConfig) -> f64 {
    let n = cfg.n() as f64;
    n * n + (cfg.mu4() - 1.0) * n
}

/// Average squared DPAF without pulse shaping at symbol-rate delay `τ` and
/// (possibly fractional) Doppler `ν`.
pub fn dpaf_theory_nops(cfg: &AfdmConfig, tau: i64, nu: f64) -> f64 {
    nops_general(cfg.n(), cfg.two_n_c1() as f64, cfg.mu4(), tau, nu)
}

fn nops_general(n: usize, two_n_c1: f64, mu4: f64, tau: i64, nu: f64) -> f64 {
    let nf = n as f64;
    let tau_n = tau.rem_euclid(n as i64);
    let arg = two_n_c1 * tau_n as f64 - nu;
    let d_arg = dirichlet_sq(arg, n);
    let floor: f64 = (0..n).map(|m| dirichlet_sq(m as f64 + arg, n)).sum();
    d_arg * dirichlet_sq(tau_n as f64, n) / (nf * nf) + (mu4 - 2.0) / nf * d_arg + floor / nf
}

/// OFDM reduction (`2Nc1 = 0`), evaluated directly.
pub fn dpaf_theory_ofdm(cfg: &AfdmConfig, tau: i64, nu: f64) -> f64 {
    let (n, mu4) = (cfg.n(), cfg.mu4());
    let nf = n as f64;
    let d_nu = dirichlet_sq(nu, n);
    let floor: f64 = (0..n).map(|m| dirichlet_sq(m as f64 - nu, n)).sum();
    d_nu * dirichlet_sq(tau as f64, n) / (nf * nf) + (mu4 - 2.0) / nf * d_nu + floor / nf
}

/// OCDM reduction (`2Nc1 = 1`), evaluated directly.
pub fn dpaf_theory_ocdm(cfg: &AfdmConfig, tau: i64, nu: f64) -> f64 {
    let (n, mu4) = (cfg.n(), cfg.mu4());
    let nf = n as f64;
    let tau_n = tau.rem_euclid(n as i64) as f64;
    let d = dirichlet_sq(tau_n - nu, n);
    let floor: f64 = (0..n).map(|m| dirichlet_sq(m as f64 + tau_n - nu, n)).sum();
    d * dirichlet_sq(tau_n, n) / (nf * nf) + (mu4 - 2.0) / nf * d + floor / nf
}

/// `|χ_g(τ, ν)|²`, exact phases for integer ν.
fn pulse_dpaf_sq(g: &EffectiveResponse, tau: i64, nu: f64) -> f64 {
    if nu.fract() == 0.0 {
        g.dpaf_int(tau, nu as i64).norm_sqr()
    } else {
        g.dpaf(tau, nu).norm_sqr()
    }
}

/// Sum over `n` of `|χ_g(<τ-nL>, ν)|² [(μ4-2)/N D²(2Nc1 n - ν) + N]`,
/// skipping lags outside the pulse autocorrelation support.
fn sea_term(cfg: &AfdmConfig, g: &EffectiveResponse, tau: i64, nu: f64, chi_sq: impl Fn(i64) -> f64) -> f64 {
    let n = g.n();
    let l = g.oversampling() as i64;
    let nl = g.len() as i64;
    let nf = n as f64;
    let reach = 2 * g.reach() as i64;
    let two_n_c1 = cfg.two_n_c1() as f64;
    let mu4 = cfg.mu4();
    let mut acc = 0.0;
    for k in 0..n as i64 {
        let d = (tau - k * l).rem_euclid(nl);
        let centered = if d > nl / 2 { d - nl } else { d };
        if centered.abs() > reach {
            continue;
        }
        let w = chi_sq(d);
        if w == 0.0 {
            continue;
        }
        acc += w * ((mu4 - 2.0) / nf * dirichlet_sq(two_n_c1 * k as f64 - nu, n) + nf);
    }
    acc
}

/// Average squared DPAF of pulse-shaped AFDM at oversampled delay `τ` and
/// Doppler `ν`. Exact for integer `ν`; `g` must be built for `cfg.n()`.
pub fn dpaf_theory_ps(cfg: &AfdmConfig, g: &EffectiveResponse, tau: i64, nu: f64) -> f64 {
    let n = g.n();
    dirichlet_sq(nu, n) * pulse_dpaf_sq(g, tau, nu) + sea_term(cfg, g, tau, nu, |d| pulse_dpaf_sq(g, d, nu))
}

/// Specialized mainlobe level of pulse-shaped AFDM,
/// `N² + N Σ_n R_g(-nL)² + (μ4-2)N Σ_{k<2Nc1} R_g(-k·NL/(2Nc1))²`.
///
/// Only defined when `2Nc1 > 0` divides `N`; otherwise `None` and the
/// general [`dpaf_theory_ps`] at the origin applies.
pub fn mainlobe_ps(cfg: &AfdmConfig, g: &EffectiveResponse) -> Option<f64> {
    let n = g.n();
    let t = cfg.two_n_c1() as usize;
    if t == 0 || !n.is_multiple_of(t) {
        return None;
    }
    let (l, nl) = (g.oversampling() as i64, g.len() as i64);
    let nf = n as f64;
    let sq = |x: f64| x * x;
    let s1: f64 = (0..n as i64).map(|k| sq(g.pacf(-k * l))).sum();
    let step = nl / t as i64;
    let s2: f64 = (0..t as i64).map(|k| sq(g.pacf(-k * step))).sum();
    Some(nf * nf + nf * s1 + (cfg.mu4() - 2.0) * nf * s2)
}

/// Delay cut at `ν = 0` split into `(N²R_g(τ)², weighted sidelobe sum)`.
pub fn delay_cut_terms(cfg: &AfdmConfig, g: &EffectiveResponse, tau: i64) -> (f64, f64) {
    let n = g.n() as f64;
    let r = g.pacf(tau);
    let sq = |x: f64| x * x;
    (n * n * r * r, sea_term(cfg, g, tau, 0.0, |d| sq(g.pacf(d))))
}

/// Doppler cut at `τ = 0` split into `(D²(ν)|F_g(ν)|², weighted sidelobe sum)`.
pub fn doppler_cut_terms(cfg: &AfdmConfig, g: &EffectiveResponse, nu: f64) -> (f64, f64) {
    let main = dirichlet_sq(nu, g.n()) * g.sse(nu).norm_sqr();
    (main, sea_term(cfg, g, 0, nu, |d| pulse_dpaf_sq(g, d, nu)))
}

/// Average delay cut of pulse-shaped AFDM over `taus`.
pub fn delay_cut_ps(cfg: &AfdmConfig, g: &EffectiveResponse, taus: &[i64]) -> Vec<f64> {
    taus.iter().map(|&t| {
        let (a, b) = delay_cut_terms(cfg, g, t);
        a + b
    })
    .collect()
}

/// Average Doppler cut of pulse-shaped AFDM over `nus`.
pub fn doppler_cut_ps(cfg: &AfdmConfig, g: &EffectiveResponse, nus: &[f64]) -> Vec<f64> {
    nus.iter().map(|&v| {
        let (a, b) = doppler_cut_terms(cfg, g, v);
        a + b
    })
    .collect()
}

/// Theory surface over `grid`. With a pulse, delays are at the oversampled
/// rate and fractional Doppler marks the result approximate.
pub fn theory_grid(cfg: &AfdmConfig, pulse: Option<&EffectiveResponse>, grid: &DelayDopplerGrid) -> Result<DpafGrid> {
    let approximate = match pulse {
        Some(g) => {
            if g.n() != cfg.n() || g.oversampling() != cfg.oversampling() {
                return Err(Error::Config("pulse response does not match the frame configuration".into()));
            }
            grid.check_delay_span(g.len())?;
            !grid.is_integer_doppler()
        }
        None => {
            grid.check_delay_span(cfg.n())?;
            false
        }
    };
    let values = grid
        .cells()
        .map(|(t, v)| match pulse {
            Some(g) => dpaf_theory_ps(cfg, g, t, v),
            None => dpaf_theory_nops(cfg, t, v),
        })
        .collect();
    Ok(DpafGrid {
        grid: grid.clone(),
        values,
        stderr: None,
        normalization: Normalization::Absolute,
        approximate,
        trials: None,
    })
}

/// Sidelobe cells at the reduced level `(μ4-1)N` in the unshaped case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepressionMap {
    /// `(τ, <2Nc1·τ>_N)` for `τ = 1..N-1`.
    pub entries: Vec<(i64, i64)>,
    /// `N/(2Nc1)` when `2Nc1` divides `N`.
    pub delay_gap: Option<usize>,
    /// `2Nc1` when it divides `N`.
    pub doppler_gap: Option<usize>,
    n: usize,
}

impl DepressionMap {
    /// Whether the integer cell `(τ, ν)` (both reduced modulo `N`) is a depression.
    pub fn contains(&self, tau: i64, nu: i64) -> bool {
        let n = self.n as i64;
        let t = tau.rem_euclid(n);
        t != 0 && self.entries[(t - 1) as usize].1 == nu.rem_euclid(n)
    }
}

/// Depression positions for the configured chirp parameter.
pub fn find_depressions(cfg: &AfdmConfig) -> DepressionMap {
    let n = cfg.n();
    let t = cfg.two_n_c1() as usize;
    let entries = (1..n as i64).map(|tau| (tau, (t as i64 * tau).rem_euclid(n as i64))).collect();
    let divides = t > 0 && n.is_multiple_of(t);
    DepressionMap {
        entries,
        delay_gap: divides.then(|| n / t),
        doppler_gap: divides.then_some(t),
        n,
    }
}
