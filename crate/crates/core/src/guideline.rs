//! Chirp-parameter selection for a strong/weak target pair.
//!
//! The weak target's mainlobe falls on a depression of the strong target's
//! sidelobes when `<2Nc1·Δτ>_N = <Δν>_N`. Solving for `c1` gives the
//! forbidden values
//! `c̄1(k) = (v_w - v_s) f_c / (2 (d_w - d_s) f_s²) + k c / (4 (d_w - d_s) f_s)`,
//! widened to `[c̄1 - σ_c, c̄1 + σ_c]` for prediction uncertainty.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::ambiguity::find_depressions;
use crate::frame::AfdmConfig;
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Absolute slack on `c1` comparisons.
const C1_TOL: f64 = 1e-9;

/// Predicted geometry of the two targets and the radio parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidelineInput {
    pub d_s: f64,
    pub d_w: f64,
    pub v_s: f64,
    pub v_w: f64,
    pub f_c: f64,
    /// Symbol-rate sample frequency `N·Δf`.
    pub f_s: f64,
    pub n: usize,
    /// Half-width of the forbidden intervals, in units of `c1`.
    pub sigma_c: f64,
}

impl GuidelineInput {
    #[allow(clippy::too_many_arguments)]
    pub fn new(d_s: f64, d_w: f64, v_s: f64, v_w: f64, f_c: f64, f_s: f64, n: usize, sigma_c: f64) -> Result<Self> {
        let input = Self { d_s, d_w, v_s, v_w, f_c, f_s, n, sigma_c };
        input.validate()?;
        Ok(input)
    }

    /// Scenario with the given symbol-rate delay and Doppler differences and
    /// the strong target at the origin.
    pub fn from_normalized(delta_tau: f64, delta_nu: f64, n: usize, f_c: f64, f_s: f64, sigma_c: f64) -> Result<Self> {
        let d_w = delta_tau * SPEED_OF_LIGHT / (2.0 * f_s);
        let v_w = delta_nu * SPEED_OF_LIGHT * f_s / (2.0 * f_c * n as f64);
        Self::new(0.0, d_w, 0.0, v_w, f_c, f_s, n, sigma_c)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.d_s, self.d_w, self.v_s, self.v_w, self.f_c, self.f_s, self.sigma_c];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("guideline inputs must be finite".into()));
        }
        if !(self.f_c > 0.0) || !(self.f_s > 0.0) || self.n < 2 {
            return Err(Error::Config("f_c and f_s must be positive and N at least 2".into()));
        }
        if self.sigma_c < 0.0 {
            return Err(Error::Config("sigma_c must be nonnegative".into()));
        }
        if self.d_w == self.d_s {
            return Err(Error::Degenerate("targets at equal range: every c1 places the weak target on the same delay".into()));
        }
        Ok(())
    }

    /// Symbol-rate delay difference `2(d_w - d_s) f_s / c`.
    pub fn delta_tau(&self) -> f64 {
        2.0 * (self.d_w - self.d_s) * self.f_s / SPEED_OF_LIGHT
    }

    /// Normalized Doppler difference `2(v_w - v_s) f_c N / (c f_s)`.
    pub fn delta_nu(&self) -> f64 {
        2.0 * (self.v_w - self.v_s) * self.f_c * self.n as f64 / (SPEED_OF_LIGHT * self.f_s)
    }

    /// `c̄1(0)`.
    pub fn base(&self) -> f64 {
        (self.v_w - self.v_s) * self.f_c / (2.0 * (self.d_w - self.d_s) * self.f_s * self.f_s)
    }

    /// `c̄1(k+1) - c̄1(k)`.
    pub fn spacing(&self) -> f64 {
        SPEED_OF_LIGHT / (4.0 * (self.d_w - self.d_s) * self.f_s)
    }

    pub fn center(&self, k: i64) -> f64 {
        self.base() + k as f64 * self.spacing()
    }
}

/// One forbidden value and its robustness interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenC1 {
    pub k: i64,
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ForbiddenC1 {
    fn at(input: &GuidelineInput, k: i64) -> Self {
        let center = input.center(k);
        Self { k, center, lo: center - input.sigma_c, hi: center + input.sigma_c }
    }

    pub fn contains(&self, c1: f64) -> bool {
        c1 >= self.lo - C1_TOL && c1 <= self.hi + C1_TOL
    }
}

/// Forbidden `c1` values for every `k` in `k_range`.
pub fn forbidden_c1(input: &GuidelineInput, k_range: RangeInclusive<i64>) -> Result<Vec<ForbiddenC1>> {
    input.validate()?;
    Ok(k_range.map(|k| ForbiddenC1::at(input, k)).collect())
}

/// Forbidden value closest to `c1`.
pub fn nearest_forbidden(input: &GuidelineInput, c1: f64) -> ForbiddenC1 {
    let k = ((c1 - input.base()) / input.spacing()).round() as i64;
    ForbiddenC1::at(input, k)
}

/// Whether `c1 = two_n_c1 / (2N)` lies in a forbidden interval.
pub fn analytic_forbidden(input: &GuidelineInput, two_n_c1: u32) -> bool {
    let c1 = two_n_c1 as f64 / (2 * input.n) as f64;
    nearest_forbidden(input, c1).contains(c1)
}

/// Depression-map test: is `(Δτ, <Δν>_N)` a depression for `two_n_c1`?
/// `None` when the rounded cell is off-grid (delay difference a multiple of
/// `N`), or when `exact` is set and the differences are not integers.
pub fn geometric_collision(input: &GuidelineInput, two_n_c1: u32, exact: bool) -> Option<bool> {
    let (dt, dn) = (input.delta_tau(), input.delta_nu());
    let (rt, rn) = (dt.round(), dn.round());
    if exact && ((dt - rt).abs() > 1e-6 || (dn - rn).abs() > 1e-6) {
        return None;
    }
    if (rt as i64).rem_euclid(input.n as i64) == 0 {
        return None;
    }
    let cfg = AfdmConfig::new(input.n, two_n_c1 as i64, 0.0).ok()?;
    Some(find_depressions(&cfg).contains(rt as i64, rn as i64))
}

/// Outcome of both tests for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateVerdict {
    pub two_n_c1: u32,
    pub c1: f64,
    pub analytic: bool,
    pub geometric: Option<bool>,
    pub nearest: ForbiddenC1,
}

impl CandidateVerdict {
    pub fn accepted(&self) -> bool {
        !self.analytic && self.geometric != Some(true)
    }

    /// False when the interval rule and the depression map disagree.
    pub fn consistent(&self) -> bool {
        self.geometric.is_none_or(|g| g == self.analytic)
    }

    pub fn describe(&self) -> String {
        format!(
            "2Nc1={} c1={:.6}: interval [{:.6}, {:.6}] (k={}) {}, depression {}",
            self.two_n_c1,
            self.c1,
            self.nearest.lo,
            self.nearest.hi,
            self.nearest.k,
            if self.analytic { "hit" } else { "clear" },
            match self.geometric {
                Some(true) => "hit",
                Some(false) => "clear",
                None => "n/a",
            }
        )
    }
}

/// Evaluates every candidate; candidates must lie in `[1, 2N-1]`.
pub fn evaluate_candidates(input: &GuidelineInput, candidates: &[u32]) -> Result<Vec<CandidateVerdict>> {
    input.validate()?;
    let max = 2 * input.n as u32 - 1;
    if let Some(c) = candidates.iter().find(|&&c| c == 0 || c > max) {
        return Err(Error::Config(format!("candidate 2Nc1 = {c} outside [1, {max}]")));
    }
    Ok(candidates
        .iter()
        .map(|&t| {
            let c1 = t as f64 / (2 * input.n) as f64;
            CandidateVerdict {
                two_n_c1: t,
                c1,
                analytic: analytic_forbidden(input, t),
                geometric: geometric_collision(input, t, false),
                nearest: nearest_forbidden(input, c1),
            }
        })
        .collect())
}

/// Smallest candidate rejected by neither the interval rule nor the
/// depression map.
pub fn choose_two_n_c1(input: &GuidelineInput, candidates: &[u32]) -> Result<u32> {
    let verdicts = evaluate_candidates(input, candidates)?;
    let mut sorted: Vec<&CandidateVerdict> = verdicts.iter().collect();
    sorted.sort_by_key(|v| v.two_n_c1);
    sorted
        .iter()
        .find(|v| v.accepted())
        .map(|v| v.two_n_c1)
        .ok_or_else(|| Error::Exhausted(verdicts.iter().map(|v| v.describe()).collect()))
}
