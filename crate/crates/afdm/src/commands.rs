//! Experiment pipelines behind the CLI subcommands.

use std::fmt::Write as _;

use afdm_core::ambiguity::{
    delay_cut_ps, delay_cut_terms, doppler_cut_ps, doppler_cut_terms, dpaf_theory_ps, find_depressions, mainlobe_nops,
    theory_grid, DelayDopplerGrid, DpafGrid,
};
use afdm_core::channel::normalized_params;
use afdm_core::guideline::{choose_two_n_c1, evaluate_candidates, forbidden_c1};
use afdm_core::pulse::{effective_response, EffectiveResponse};

use crate::config::Resolved;
use crate::error::{CliError, CliResult};
use crate::export::{num, Table};
use crate::par;

/// Which DPAF surfaces to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Theory,
    Sim,
    Both,
}

impl Mode {
    fn theory(self) -> bool {
        self != Mode::Sim
    }

    fn sim(self) -> bool {
        self != Mode::Theory
    }
}

fn response(r: &Resolved) -> CliResult<EffectiveResponse> {
    Ok(effective_response(&r.pulse, r.frame.n())?)
}

/// Unshaped symbol-rate frames use the exact unshaped closed form.
fn theory_pulse(r: &Resolved) -> CliResult<Option<EffectiveResponse>> {
    if !r.shaped && r.frame.oversampling() == 1 {
        Ok(None)
    } else {
        response(r).map(Some)
    }
}

fn mainlobe(r: &Resolved, g: Option<&EffectiveResponse>) -> f64 {
    match g {
        Some(g) => dpaf_theory_ps(&r.frame, g, 0, 0.0),
        None => mainlobe_nops(&r.frame),
    }
}

fn pulse_label(r: &Resolved) -> String {
    let (m, l) = (r.pulse.half_width(), r.pulse.oversampling());
    match r.pulse.rolloff() {
        Some(a) if r.shaped => format!("rrc rolloff={a} M={m} L={l}"),
        _ => format!("none M={m} L={l}"),
    }
}

fn frame_metadata(t: &mut Table, r: &Resolved) {
    t.meta("waveform", r.waveform);
    t.meta("n", r.frame.n());
    t.meta("two_n_c1", r.frame.two_n_c1());
    t.meta("c1", num(r.frame.c1()));
    t.meta("c2", num(r.frame.c2()));
    t.meta("modulation", r.frame.constellation());
    t.meta("mu4", num(r.frame.mu4()));
    t.meta("pulse", pulse_label(r));
}

fn require_trials(r: &Resolved) -> CliResult<u64> {
    match r.config.trials {
        0 => Err(CliError::Usage("simulation needs --trials >= 1".into())),
        t => Ok(t),
    }
}

/// Theory and/or Monte Carlo surface over the configured grid.
pub fn dpaf(r: &Resolved, mode: Mode) -> CliResult<Table> {
    let trials = if mode.sim() { require_trials(r)? } else { 0 };
    let g = theory_pulse(r)?;
    let main = mainlobe(r, g.as_ref());
    let db = r.config.grid.normalization == "mainlobe_db";
    let scale = |grid: DpafGrid| if db { grid.to_db(main) } else { grid };

    let theory = if mode.theory() { Some(scale(theory_grid(&r.frame, g.as_ref(), &r.grid)?)) } else { None };
    let sim = if mode.sim() {
        Some(scale(par::dpaf_monte_carlo(&r.frame, &r.pulse, &r.grid, trials, r.config.seed)?))
    } else {
        None
    };

    let mut header = vec!["tau", "nu"];
    match mode {
        Mode::Theory => header.push("value"),
        Mode::Sim => header.push("value"),
        Mode::Both => header.extend(["value_theory", "value_sim"]),
    }
    if mode.sim() && !db {
        header.push("stderr");
    }
    let mut t = Table::new(&header);
    frame_metadata(&mut t, r);
    t.meta("mode", format!("{mode:?}").to_lowercase());
    t.meta("normalization", &r.config.grid.normalization);
    t.meta("mainlobe_theory", num(main));
    t.meta("approximate", theory.as_ref().is_some_and(|g| g.approximate));
    t.meta("trials", trials);
    t.meta("seed", r.config.seed);

    for (i, (tau, nu)) in r.grid.cells().enumerate() {
        let mut row = vec![tau.to_string(), num(nu)];
        if let Some(th) = &theory {
            row.push(num(th.values[i]));
        }
        if let Some(s) = &sim {
            row.push(num(s.values[i]));
            if let Some(se) = &s.stderr {
                row.push(num(se[i]));
            }
        }
        t.push(row);
    }
    Ok(t)
}

/// Delay cut (`ν = 0`) and Doppler cut (`τ = 0`) with the pulse-only overlays.
pub fn cuts(r: &Resolved, mode: Mode) -> CliResult<Table> {
    let trials = if mode.sim() { require_trials(r)? } else { 0 };
    let g = response(r)?;
    let delays = r.grid.delays().to_vec();
    let dopplers = r.grid.dopplers().to_vec();
    let (delay_theory, doppler_theory) = if mode.theory() {
        (delay_cut_ps(&r.frame, &g, &delays), doppler_cut_ps(&r.frame, &g, &dopplers))
    } else {
        (Vec::new(), Vec::new())
    };
    let (delay_sim, doppler_sim) = if mode.sim() {
        let seed = r.config.seed;
        let dg = DelayDopplerGrid::new(delays.clone(), vec![0.0])?;
        let ng = DelayDopplerGrid::new(vec![0], dopplers.clone())?;
        (
            par::dpaf_monte_carlo(&r.frame, &r.pulse, &dg, trials, seed)?.values,
            par::dpaf_monte_carlo(&r.frame, &r.pulse, &ng, trials, seed)?.values,
        )
    } else {
        (Vec::new(), Vec::new())
    };

    let mut t = Table::new(&["axis", "coordinate", "theory", "sim", "pacf_sq", "sse_sq"]);
    frame_metadata(&mut t, r);
    t.meta("mode", format!("{mode:?}").to_lowercase());
    t.meta("mainlobe_theory", num(dpaf_theory_ps(&r.frame, &g, 0, 0.0)));
    t.meta("pacf_sq", "N^2 R_g(tau)^2");
    t.meta("sse_sq", "D_N(nu)^2 |F_g(nu)|^2");
    t.meta("trials", trials);
    t.meta("seed", r.config.seed);
    let cell = |v: &[f64], i: usize| v.get(i).map(|&x| num(x)).unwrap_or_default();
    for (i, &tau) in delays.iter().enumerate() {
        let pacf = delay_cut_terms(&r.frame, &g, tau).0;
        t.push(vec!["delay".into(), tau.to_string(), cell(&delay_theory, i), cell(&delay_sim, i), num(pacf), String::new()]);
    }
    for (i, &nu) in dopplers.iter().enumerate() {
        let sse = doppler_cut_terms(&r.frame, &g, nu).0;
        t.push(vec!["doppler".into(), num(nu), cell(&doppler_theory, i), cell(&doppler_sim, i), String::new(), num(sse)]);
    }
    Ok(t)
}

/// Weak-target velocity RMSE for every waveform and SNR in the scenario.
pub fn scenario(r: &Resolved) -> CliResult<Table> {
    let trials = require_trials(r)?;
    let section = r.scenario_section()?;
    let scenario = r.scenario()?;
    let waveforms = r.scenario_waveforms()?;
    let window = r.window()?;
    let rows = par::rmse_experiment(&scenario, &waveforms, &r.pulse, &section.snr_db, &window, trials, r.config.seed)?;

    let mut t = Table::new(&["waveform", "snr_db", "rmse_mps", "trials", "seed"]);
    for (name, cfg) in &waveforms {
        t.meta(&format!("waveform.{name}"), format!("two_n_c1={} c1={}", cfg.two_n_c1(), num(cfg.c1())));
    }
    for (i, target) in scenario.targets.iter().enumerate() {
        let p = normalized_params(target, &scenario.radio, &r.frame);
        t.meta(
            &format!("target.{i}"),
            format!("tau={} nu={} amp={}{}", p.tau, num(p.nu), num(target.mean_amp), if i == section.weak { " weak" } else { "" }),
        );
    }
    t.meta(
        "window",
        format!("nu_w +- {} step {} interpolate={}", num(window.half_width), num(window.step), window.interpolate),
    );
    t.meta("pulse", pulse_label(r));
    t.meta("symbols", r.frame.n_sym());
    for row in rows {
        t.push(vec![row.waveform, num(row.snr_db), num(row.rmse_mps), row.trials.to_string(), row.seed.to_string()]);
    }
    Ok(t)
}

/// Candidate verdicts plus a readable report.
pub fn design(r: &Resolved) -> CliResult<(Table, String)> {
    let input = r.guideline_input()?;
    let candidates = &r.config.design.as_ref().expect("guideline_input checked the section").candidates;
    let verdicts = evaluate_candidates(&input, candidates)?;

    let mut report = String::new();
    let n = input.n as f64;
    writeln!(report, "delay difference {:.4} samples, Doppler difference {:.4}", input.delta_tau(), input.delta_nu()).unwrap();
    writeln!(report, "forbidden c1 = {:.6} + k * {:.6}, half-width {}", input.base(), input.spacing(), input.sigma_c).unwrap();
    let c1_max = verdicts.iter().map(|v| v.c1).fold(0.0, f64::max);
    let k_lo = ((0.0 - input.base()) / input.spacing()).floor() as i64;
    let k_hi = ((c1_max - input.base()) / input.spacing()).ceil() as i64;
    let (k_lo, k_hi) = (k_lo.min(k_hi), k_lo.max(k_hi));
    for f in forbidden_c1(&input, k_lo..=k_hi)? {
        writeln!(report, "  k={:>3}: c1 in [{:.6}, {:.6}] (2Nc1 in [{:.3}, {:.3}])", f.k, f.lo, f.hi, 2.0 * n * f.lo, 2.0 * n * f.hi).unwrap();
    }
    let (dt, dn) = (input.delta_tau().round() as i64, input.delta_nu().round() as i64);

    let mut t = Table::new(&["two_n_c1", "c1", "analytic", "geometric", "depression_nu", "nearest_k", "lo", "hi", "accepted", "consistent"]);
    t.meta("n", input.n);
    t.meta("delta_tau", num(input.delta_tau()));
    t.meta("delta_nu", num(input.delta_nu()));
    t.meta("sigma_c", num(input.sigma_c));
    for v in &verdicts {
        writeln!(report, "  {}{}", v.describe(), if v.accepted() { "" } else { "  -> rejected" }).unwrap();
        let cfg = afdm_core::frame::AfdmConfig::new(input.n, v.two_n_c1 as i64, 0.0)?;
        let depression_nu = find_depressions(&cfg)
            .entries
            .iter()
            .find(|e| e.0 == dt.rem_euclid(input.n as i64))
            .map(|e| e.1.to_string())
            .unwrap_or_default();
        t.push(vec![
            v.two_n_c1.to_string(),
            num(v.c1),
            v.analytic.to_string(),
            v.geometric.map(|g| g.to_string()).unwrap_or_default(),
            depression_nu,
            v.nearest.k.to_string(),
            num(v.nearest.lo),
            num(v.nearest.hi),
            v.accepted().to_string(),
            v.consistent().to_string(),
        ]);
    }
    writeln!(report, "weak-target cell ({dt}, {})", dn.rem_euclid(input.n as i64)).unwrap();
    let chosen = choose_two_n_c1(&input, candidates)?;
    writeln!(report, "chosen 2Nc1 = {chosen} (c1 = {:.6})", chosen as f64 / (2.0 * n)).unwrap();
    t.meta("chosen", chosen);
    Ok((t, report))
}
