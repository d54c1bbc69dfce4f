//! Experiment configuration: a TOML file, its resolved form and its hash.

use std::fs;
use std::path::Path;

use afdm_core::ambiguity::DelayDopplerGrid;
use afdm_core::channel::{Fluctuation, RadioConfig, Target};
use afdm_core::constellation::Constellation;
use afdm_core::frame::{AfdmConfig, Waveform};
use afdm_core::guideline::GuidelineInput;
use afdm_core::pulse::{rect_pulse, rrc_taps, PulseShape};
use afdm_core::receiver::{Scenario, SearchWindow};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `afdm`, `ofdm` or `ocdm`.
    pub waveform: String,
    pub trials: u64,
    pub seed: u64,
    pub frame: FrameSection,
    pub pulse: PulseSection,
    pub grid: GridSection,
    pub radio: RadioSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub n: usize,
    /// Integer chirp rate `2N·c1`; ignored for OFDM and OCDM.
    pub two_n_c1: i64,
    pub c2: f64,
    pub n_cp: usize,
    /// Guard length `M`, also the pulse half-width in symbols.
    pub guard: usize,
    pub oversampling: usize,
    pub symbols: usize,
    pub modulation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    /// `rrc` or `none`.
    pub shape: String,
    pub rolloff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub tau_min: i64,
    pub tau_max: i64,
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_step: f64,
    /// `absolute` or `mainlobe_db`.
    pub normalization: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_hz: f64,
    pub subcarrier_spacing_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub range_m: f64,
    pub velocity_mps: f64,
    /// Mean amplitude in dB relative to 1.
    pub amplitude_db: f64,
    /// `swerling0` or `swerling2`.
    pub fluctuation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformEntry {
    pub name: String,
    pub waveform: String,
    pub two_n_c1: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    /// Index of the weak target in `targets`.
    pub weak: usize,
    pub snr_db: Vec<f64>,
    pub window_half_width: f64,
    pub window_step: f64,
    pub interpolate: bool,
    pub targets: Vec<TargetSection>,
    pub waveforms: Vec<WaveformEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub sigma_c: f64,
    pub candidates: Vec<u32>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            waveform: "afdm".into(),
            trials: 1000,
            seed: 1,
            frame: FrameSection {
                n: 128,
                two_n_c1: 8,
                c2: 0.0,
                n_cp: 16,
                guard: 5,
                oversampling: 4,
                symbols: 50,
                modulation: "qam16".into(),
            },
            pulse: PulseSection { shape: "rrc".into(), rolloff: 0.35 },
            grid: GridSection {
                tau_min: -16,
                tau_max: 16,
                nu_min: -16.0,
                nu_max: 16.0,
                nu_step: 1.0,
                normalization: "absolute".into(),
            },
            radio: RadioSection { carrier_hz: 24e9, subcarrier_spacing_hz: 15e3, snr_db: None },
            scenario: None,
            design: None,
        }
    }
}

impl ScenarioSection {
    /// Strong target at 156.25 m, weak target 21 dB down at 937.5 m, both
    /// at 100 m/s; AFDM with `2Nc1 = 2` against OFDM.
    pub fn strong_weak() -> Self {
        let target = |range_m, amplitude_db| TargetSection {
            range_m,
            velocity_mps: 100.0,
            amplitude_db,
            fluctuation: "swerling2".into(),
        };
        Self {
            weak: 1,
            snr_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            window_half_width: 2.0,
            window_step: 0.125,
            interpolate: true,
            targets: vec![target(156.25, 0.0), target(937.5, -21.0)],
            waveforms: vec![
                WaveformEntry { name: "AFDM".into(), waveform: "afdm".into(), two_n_c1: 2 },
                WaveformEntry { name: "OFDM".into(), waveform: "ofdm".into(), two_n_c1: 0 },
            ],
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the emitted TOML, hex encoded.
    pub fn hash(&self) -> String {
        config_hash(&self.to_toml())
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        Resolved::new(self)
    }
}

/// Hash of a TOML text, insensitive to a trailing newline.
pub fn config_hash(text: &str) -> String {
    let canonical = text.lines().collect::<Vec<_>>().join("\n");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Library objects built from a validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub waveform: Waveform,
    pub frame: AfdmConfig,
    pub pulse: PulseShape,
    /// Pulse-shaping is in effect (as opposed to a single-tap pulse).
    pub shaped: bool,
    pub grid: DelayDopplerGrid,
    pub radio: RadioConfig,
    pub hash: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Resolved {
    fn new(c: &ExperimentConfig) -> CliResult<Self> {
        let waveform: Waveform = c.waveform.parse()?;
        let frame = frame_for(c, waveform, c.frame.two_n_c1)?;
        let (pulse, shaped) = match c.pulse.shape.to_ascii_lowercase().as_str() {
            "rrc" => (rrc_taps(c.frame.guard, c.frame.oversampling, c.pulse.rolloff)?, true),
            "none" => (rect_pulse(c.frame.guard, c.frame.oversampling)?, false),
            other => return Err(usage(format!("unknown pulse shape '{other}' (expected rrc or none)"))),
        };
        let g = &c.grid;
        if !(g.nu_step > 0.0) || !g.nu_step.is_finite() {
            return Err(usage("grid nu_step must be positive"));
        }
        if g.tau_min > g.tau_max {
            return Err(usage("empty delay grid: tau_min > tau_max"));
        }
        if !(g.nu_min <= g.nu_max) {
            return Err(usage("empty Doppler grid: nu_min > nu_max"));
        }
        let grid = DelayDopplerGrid::with_doppler_step((g.tau_min..=g.tau_max).collect(), g.nu_min, g.nu_max, g.nu_step)?;
        grid.check_delay_span(frame.body_len())?;
        if !["absolute", "mainlobe_db"].contains(&g.normalization.as_str()) {
            return Err(usage(format!("unknown normalization '{}' (expected absolute or mainlobe_db)", g.normalization)));
        }
        let radio = RadioConfig::new(c.radio.carrier_hz, c.radio.subcarrier_spacing_hz, c.radio.snr_db)?;
        let resolved = Self {
            config: c.clone(),
            waveform,
            frame,
            pulse,
            shaped,
            grid,
            radio,
            hash: c.hash(),
        };
        if c.scenario.is_some() {
            resolved.scenario()?;
        }
        if c.design.is_some() {
            resolved.guideline_input()?;
        }
        Ok(resolved)
    }

    pub fn scenario_section(&self) -> CliResult<&ScenarioSection> {
        self.config.scenario.as_ref().ok_or_else(|| usage("this command needs a [scenario] section"))
    }

    pub fn scenario(&self) -> CliResult<Scenario> {
        let s = self.scenario_section()?;
        let targets = s
            .targets
            .iter()
            .map(|t| {
                let fluctuation = match t.fluctuation.to_ascii_lowercase().as_str() {
                    "swerling0" => Fluctuation::Swerling0,
                    "swerling2" => Fluctuation::Swerling2,
                    other => return Err(usage(format!("unknown fluctuation '{other}'"))),
                };
                Ok(Target::new(t.range_m, t.velocity_mps, 10f64.powf(t.amplitude_db / 20.0), fluctuation)?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Scenario::new(targets, s.weak, self.radio)?)
    }

    pub fn window(&self) -> CliResult<SearchWindow> {
        let s = self.scenario_section()?;
        if !(s.window_half_width >= 0.0) || !(s.window_step > 0.0) {
            return Err(usage("search window needs half_width >= 0 and step > 0"));
        }
        Ok(SearchWindow { half_width: s.window_half_width, step: s.window_step, interpolate: s.interpolate })
    }

    /// Named frame configurations compared in the scenario.
    pub fn scenario_waveforms(&self) -> CliResult<Vec<(String, AfdmConfig)>> {
        let s = self.scenario_section()?;
        if s.waveforms.is_empty() {
            return Err(usage("scenario lists no waveforms"));
        }
        s.waveforms
            .iter()
            .map(|w| Ok((w.name.clone(), frame_for(&self.config, w.waveform.parse()?, w.two_n_c1)?)))
            .collect()
    }

    /// Strong/weak geometry for the chirp design rule: the weak target and
    /// the first other target.
    pub fn guideline_input(&self) -> CliResult<GuidelineInput> {
        let design = self.config.design.as_ref().ok_or_else(|| usage("this command needs a [design] section"))?;
        let s = self.scenario_section()?;
        let weak = s.targets.get(s.weak).ok_or_else(|| usage("weak target index out of range"))?;
        let strong = s
            .targets
            .iter()
            .enumerate()
            .find(|(i, _)| *i != s.weak)
            .map(|(_, t)| t)
            .ok_or_else(|| usage("design needs at least two targets"))?;
        let f_s = self.radio.sample_rate(self.frame.n());
        Ok(GuidelineInput::new(
            strong.range_m,
            weak.range_m,
            strong.velocity_mps,
            weak.velocity_mps,
            self.radio.carrier_hz,
            f_s,
            self.frame.n(),
            design.sigma_c,
        )?)
    }
}

fn frame_for(c: &ExperimentConfig, waveform: Waveform, two_n_c1: i64) -> CliResult<AfdmConfig> {
    let f = &c.frame;
    let constellation: Constellation = f.modulation.parse()?;
    Ok(AfdmConfig::for_waveform(waveform, f.n, two_n_c1, f.c2)?
        .with_cpp(f.n_cp)
        .with_guard(f.guard)
        .with_oversampling(f.oversampling)?
        .with_symbols(f.symbols)?
        .with_constellation(constellation)?)
}
