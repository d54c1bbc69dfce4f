//! Small DFT kernel used by the modulator and the grid evaluators.
//!
//! Radix-2 iterative Cooley-Tukey for power-of-two lengths, direct
//! evaluation otherwise. Sign convention: `X[k] = sum_n x[n] e^{-j2πkn/N}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

/// `e^{j2π·turns}` with the argument reduced to [-1/2, 1/2) first.
#[inline]
pub fn cis_turns(turns: f64) -> Complex64 {
    let t = turns - turns.round();
    let (s, c) = (2.0 * PI * t).sin_cos();
    Complex64::new(c, s)
}

/// `e^{j2π·num/den}` with exact integer reduction of `num` modulo `den`.
#[inline]
pub fn cis_ratio(num: i64, den: usize) -> Complex64 {
    let r = num.rem_euclid(den as i64);
    cis_turns(r as f64 / den as f64)
}

/// In-place forward DFT.
pub fn forward(data: &mut [Complex64]) {
    transform(data, false);
}

/// In-place inverse DFT without the 1/N factor.
pub fn inverse_unscaled(data: &mut [Complex64]) {
    transform(data, true);
}

fn transform(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, inverse);
    } else {
        direct(data, inverse);
    }
}

fn direct(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    let sign: i64 = if inverse { 1 } else { -1 };
    let twiddles: Vec<Complex64> = (0..n as i64).map(|k| cis_ratio(sign * k, n)).collect();
    let out: Vec<Complex64> = (0..n)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(i, &x)| x * twiddles[(i * k) % n])
                .sum()
        })
        .collect();
    data.copy_from_slice(&out);
}

fn radix2(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let sign: i64 = if inverse { 1 } else { -1 };
    let twiddles: Vec<Complex64> = (0..n as i64 / 2).map(|k| cis_ratio(sign * k, n)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}
