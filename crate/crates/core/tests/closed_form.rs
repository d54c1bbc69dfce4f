mod common;

use afdm_core::ambiguity::{dpaf_theory_nops, dpaf_theory_ps, mainlobe_ps};
use afdm_core::constellation::Constellation;
use afdm_core::frame::AfdmConfig;
use afdm_core::pulse::{effective_response, rrc_taps};
use common::*;

fn config(n: usize, two_n_c1: i64, c2: f64, c: Constellation) -> AfdmConfig {
    AfdmConfig::new(n, two_n_c1, c2).unwrap().with_constellation(c).unwrap()
}

#[test]
fn unshaped_closed_form_equals_quadruple_enumeration() {
    for n in [4usize, 8] {
        for c in [Constellation::QAM16, Constellation::QPSK] {
            for t in [0i64, 1, 2, 3] {
                let cfg = config(n, t, 0.013, c);
                let a = idaft_matrix(n, cfg.c1(), cfg.c2());
                let mut worst: f64 = 0.0;
                for tau in 0..n as i64 {
                    for nu in 0..n as i64 {
                        let k = kernel(&a, tau, nu as f64);
                        let oracle = expectation_quadruples(&k, cfg.mu4());
                        worst = worst.max((dpaf_theory_nops(&cfg, tau, nu as f64) - oracle).abs());
                    }
                }
                assert!(worst <= 1e-9, "N={n} {c} 2Nc1={t}: {worst:e}");
            }
        }
    }
}

#[test]
fn collapsed_oracle_equals_enumeration() {
    let cfg = config(4, 1, 0.2, Constellation::QAM16);
    let a = idaft_matrix(4, cfg.c1(), cfg.c2());
    for (tau, nu) in [(0, 0.0), (1, 2.0), (3, 0.5), (2, -1.75)] {
        let k = kernel(&a, tau, nu);
        let (p, q) = (expectation_quadruples(&k, cfg.mu4()), expectation_collapsed(&k, cfg.mu4()));
        assert!((p - q).abs() < 1e-9);
    }
}

#[test]
fn unshaped_closed_form_holds_for_fractional_doppler() {
    let cfg = config(8, 2, 0.0, Constellation::QAM16);
    let a = idaft_matrix(8, cfg.c1(), cfg.c2());
    for tau in 0..8 {
        for nu in [-2.5, -0.3, 0.5, 1.25, 3.9] {
            let oracle = expectation_collapsed(&kernel(&a, tau, nu), cfg.mu4());
            let th = dpaf_theory_nops(&cfg, tau, nu);
            assert!((th - oracle).abs() < 1e-9, "({tau}, {nu}): {th} vs {oracle}");
        }
    }
}

#[test]
fn shaped_closed_form_equals_exact_expectation() {
    for (n, l, m, t) in [(8usize, 2usize, 1usize, 2i64), (8, 2, 1, 3), (8, 4, 1, 1), (16, 2, 2, 4)] {
        let cfg = config(n, t, 0.013, Constellation::QAM16).with_oversampling(l).unwrap();
        let g = effective_response(&rrc_taps(m, l, 0.35).unwrap(), n).unwrap();
        let b = shaped_matrix(&idaft_matrix(n, cfg.c1(), cfg.c2()), g.as_slice(), l);
        let nl = (n * l) as i64;
        let mut worst: f64 = 0.0;
        for tau in (-nl / 2)..(nl / 2) {
            for nu in -(n as i64)..=(n as i64) {
                let oracle = expectation_collapsed(&kernel(&b, tau, nu as f64), cfg.mu4());
                let th = dpaf_theory_ps(&cfg, &g, tau, nu as f64);
                worst = worst.max((th - oracle).abs() / oracle.max(1.0));
            }
        }
        assert!(worst < 1e-9, "N={n} L={l} 2Nc1={t}: {worst:e}");
        if let Some(ml) = mainlobe_ps(&cfg, &g) {
            let oracle = expectation_collapsed(&kernel(&b, 0, 0.0), cfg.mu4());
            assert!((ml - oracle).abs() < 1e-9 * oracle);
        }
    }
}

#[test]
fn exact_expectation_ignores_c2() {
    let (n, l) = (8, 2);
    let g = effective_response(&rrc_taps(1, l, 0.35).unwrap(), n).unwrap();
    let mu4 = Constellation::QAM16.kurtosis().unwrap();
    let b0 = shaped_matrix(&idaft_matrix(n, 2.0 / 16.0, 0.0), g.as_slice(), l);
    let b1 = shaped_matrix(&idaft_matrix(n, 2.0 / 16.0, 0.37), g.as_slice(), l);
    for tau in 0..16 {
        for nu in [-3.0, 0.0, 2.5] {
            let p = expectation_collapsed(&kernel(&b0, tau, nu), mu4);
            let q = expectation_collapsed(&kernel(&b1, tau, nu), mu4);
            assert!((p - q).abs() < 1e-9 * p.max(1.0));
        }
    }
}

#[test]
fn depression_and_sea_levels_exhaustive() {
    for n in [8usize, 16, 32] {
        for t in 0..2 * n as i64 {
            let cfg = config(n, t, 0.0, Constellation::QAM16);
            let map = afdm_core::ambiguity::find_depressions(&cfg);
            let (low, sea) = ((cfg.mu4() - 1.0) * n as f64, n as f64);
            for tau in 0..n as i64 {
                for nu in 0..n as i64 {
                    if tau == 0 && nu == 0 {
                        continue;
                    }
                    let v = dpaf_theory_nops(&cfg, tau, nu as f64);
                    let want = if map.contains(tau, nu) { low } else { sea };
                    assert!((v - want).abs() < 1e-9, "N={n} 2Nc1={t} ({tau},{nu}): {v} vs {want}");
                }
            }
        }
    }
}
