use afdm_core::ambiguity::{dpaf_realization, dpaf_theory_nops, find_depressions};
use afdm_core::frame::{add_cpp, daft_demodulate, idaft_modulate, AfdmConfig};
use afdm_core::guideline::{analytic_forbidden, geometric_collision, GuidelineInput};
use afdm_core::pulse::{effective_response, rrc_taps};
use afdm_core::Complex64;
use proptest::prelude::*;

fn symbols(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn daft_inverts_idaft(s in symbols(16), t2 in 0i64..32, c2 in -1.0f64..1.0) {
        let cfg = AfdmConfig::new(16, t2, c2).unwrap();
        let x = idaft_modulate(&cfg, &s).unwrap();
        let back = daft_demodulate(&cfg, &x).unwrap();
        for (a, b) in s.iter().zip(back.iter()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
        prop_assert!((energy(&x) - energy(&s)).abs() < 1e-9 * energy(&s).max(1.0));
    }

    #[test]
    fn cpp_extends_chirp_periodically(s in symbols(32), t2 in 0i64..64, cp in 1usize..12) {
        let cfg = AfdmConfig::new(32, t2, 0.2).unwrap().with_cpp(cp);
        let x = idaft_modulate(&cfg, &s).unwrap();
        let y = add_cpp(&cfg, &x).unwrap();
        prop_assert_eq!(y.len(), 32 + cp);
        // x[n - N] = x[n] e^{-j2πc1(N² - 2Nn)}
        for i in 0..cp {
            let n = i as f64 - cp as f64;
            let phase = -2.0 * core::f64::consts::PI * cfg.c1() * (1024.0 + 64.0 * n);
            let expect = x[i + 32 - cp] * Complex64::from_polar(1.0, phase);
            prop_assert!((y[i] - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn dpaf_bounded_by_origin(s in symbols(16), tau in -15i64..16, nu in -8.0f64..8.0) {
        let cfg = AfdmConfig::new(16, 3, 0.0).unwrap();
        let x = idaft_modulate(&cfg, &s).unwrap();
        let origin = dpaf_realization(&x, 0, 0.0);
        prop_assert!((origin.re - energy(&x)).abs() < 1e-9);
        prop_assert!(dpaf_realization(&x, tau, nu).norm() <= origin.re + 1e-9);
    }

    #[test]
    fn dpaf_conjugate_symmetry(s in symbols(16), tau in 0i64..16, nu in -8i64..8) {
        let x: Vec<Complex64> = s;
        let a = dpaf_realization(&x, tau, nu as f64);
        let b = dpaf_realization(&x, -tau, -nu as f64);
        // χ(-τ,-ν) = χ*(τ,ν) e^{-j2πντ/len} for integer ν
        let rot = Complex64::from_polar(1.0, -2.0 * core::f64::consts::PI * (nu * tau) as f64 / 16.0);
        prop_assert!((b - a.conj() * rot).norm() < 1e-9);
    }

    #[test]
    fn theory_is_nonnegative_and_peaks_at_origin(t2 in 0i64..32, tau in -15i64..16, nu in -16.0f64..16.0) {
        let cfg = AfdmConfig::new(16, t2, 0.0).unwrap();
        let v = dpaf_theory_nops(&cfg, tau, nu);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= dpaf_theory_nops(&cfg, 0, 0.0) + 1e-9);
    }

    #[test]
    fn shaped_energy_is_preserved_on_average(m in 1usize..5, l in 1usize..5, alpha in 0.05f64..1.0) {
        let ps = rrc_taps(m, l, alpha).unwrap();
        let g = effective_response(&ps, 16).unwrap();
        let gsum: f64 = g.as_slice().iter().map(|v| v * v).sum();
        prop_assert!((g.pacf(0) - gsum).abs() < 1e-9);
        for tau in 1..(16 * l) as i64 {
            prop_assert!(g.pacf(tau).abs() <= g.pacf(0) + 1e-9);
        }
    }

    #[test]
    fn depressions_lie_on_chirp_lattice(t2 in 1i64..63) {
        let cfg = AfdmConfig::new(32, t2, 0.0).unwrap();
        let map = find_depressions(&cfg);
        for tau in 1..32i64 {
            let nu = (t2 * tau).rem_euclid(32);
            prop_assert!(map.contains(tau, nu));
        }
    }

    #[test]
    fn analytic_and_geometric_tests_agree(dtau in 1i64..64, dnu in 0i64..64, t2 in 1u32..128) {
        let input = GuidelineInput::from_normalized(dtau as f64, dnu as f64, 64, 24e9, 0.96e6, 0.0).unwrap();
        let geo = geometric_collision(&input, t2, true);
        prop_assert_eq!(Some(analytic_forbidden(&input, t2)), geo);
    }
}
