//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use afdm_core::Complex64;

pub fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * turns)
}

/// IDAFT matrix `A[n][m] = N^{-1/2} e^{j2π(c1 n² + mn/N + c2 m²)}` by direct
/// evaluation of the definition.
pub fn idaft_matrix(n: usize, c1: f64, c2: f64) -> Vec<Vec<Complex64>> {
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|m| {
                    let (rf, mf) = (r as f64, m as f64);
                    cis(c1 * rf * rf + mf * rf / n as f64 + c2 * mf * mf) * s
                })
                .collect()
        })
        .collect()
}

/// Symbol-to-shaped-sample map `B = G·A_up`: `B[i][m] = Σ_n g[<i-nL>] A[n][m]`.
pub fn shaped_matrix(a: &[Vec<Complex64>], g: &[f64], l: usize) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let nl = n * l;
    (0..nl)
        .map(|i| {
            (0..n)
                .map(|m| (0..n).map(|k| a[k][m] * g[(i + nl - k * l % nl) % nl]).sum())
                .collect()
        })
        .collect()
}

/// Bilinear kernel `K(m, m') = Σ_i B[i][m] B*[<i-τ>][m'] e^{-j2πνi/len}`, so
/// that `χ(τ, ν) = Σ K(m, m') s_m s*_m'`.
pub fn kernel(b: &[Vec<Complex64>], tau: i64, nu: f64) -> Vec<Vec<Complex64>> {
    let len = b.len();
    let n = b[0].len();
    let mut k = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..len {
        let w = cis(-nu * i as f64 / len as f64);
        let j = (i as i64 - tau).rem_euclid(len as i64) as usize;
        for m in 0..n {
            let bm = b[i][m] * w;
            for mp in 0..n {
                k[m][mp] += bm * b[j][mp].conj();
            }
        }
    }
    k
}

/// `E{s_a s*_b s*_c s_d}` for i.i.d. zero-mean, unit-power, circular symbols
/// with fourth moment `μ4`.
pub fn fourth_moment(a: usize, b: usize, c: usize, d: usize, mu4: f64) -> f64 {
    let mut w = 0.0;
    if a == b && c == d {
        w += 1.0;
    }
    if a == c && b == d {
        w += 1.0;
    }
    if a == b && b == c && c == d {
        w += mu4 - 2.0;
    }
    w
}

/// `E|χ|²` by enumerating every index quadruple.
pub fn expectation_quadruples(k: &[Vec<Complex64>], mu4: f64) -> f64 {
    let n = k.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let w = fourth_moment(a, b, c, d, mu4);
                    if w != 0.0 {
                        acc += k[a][b] * k[c][d].conj() * w;
                    }
                }
            }
        }
    }
    acc.re
}

/// Same expectation with the quadruple sum collapsed by hand:
/// `|Σ K_aa|² + Σ |K_ab|² + (μ4-2) Σ |K_aa|²`.
pub fn expectation_collapsed(k: &[Vec<Complex64>], mu4: f64) -> f64 {
    let n = k.len();
    let trace: Complex64 = (0..n).map(|a| k[a][a]).sum();
    let frob: f64 = k.iter().flatten().map(|v| v.norm_sqr()).sum();
    let diag: f64 = (0..n).map(|a| k[a][a].norm_sqr()).sum();
    trace.norm_sqr() + frob + (mu4 - 2.0) * diag
}
