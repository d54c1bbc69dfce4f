//! AFDM modulation and framing.
//!
//! A frame is a concatenation of symbols, each laid out as
//! `[guard prefix (M) | chirp-periodic prefix (N_cp) | body (N) | guard suffix (M)]`.
//! Prefix and suffix samples are the chirp-periodic extension of the body, so
//! any window of `N` consecutive samples that starts inside the prefix region
//! is a periodically shifted copy of the body up to the chirp phase.
//!
//! OFDM is the special case `2Nc1 = 0, c2 = 0`; OCDM is `2Nc1 = 1, c2 = 1/(2N)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use rand::Rng;

use crate::constellation::{self, Constellation};
use crate::fft::{self, cis_ratio, cis_turns};
use crate::{ComplexSignal, Error, Result};

/// Waveform family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Waveform {
    Afdm,
    Ofdm,
    Ocdm,
}

impl fmt::Display for Waveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Waveform::Afdm => "afdm",
            Waveform::Ofdm => "ofdm",
            Waveform::Ocdm => "ocdm",
        })
    }
}

impl core::str::FromStr for Waveform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "afdm" => Ok(Waveform::Afdm),
            "ofdm" => Ok(Waveform::Ofdm),
            "ocdm" => Ok(Waveform::Ocdm),
            other => Err(Error::Config(format!("unknown waveform '{other}'"))),
        }
    }
}

/// Waveform and framing parameters.
///
/// The chirp rate is stored as the integer `2N·c1`, reduced modulo `2N`, so
/// `c1 = two_n_c1 / (2N)` is always on the admissible lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct AfdmConfig {
    n: usize,
    two_n_c1: u32,
    c2: f64,
    n_cp: usize,
    guard: usize,
    oversampling: usize,
    n_sym: usize,
    constellation: Constellation,
}

impl AfdmConfig {
    /// One unshaped symbol of `n` chirps, 16-QAM, no prefix.
    pub fn new(n: usize, two_n_c1: i64, c2: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("N must be positive".into()));
        }
        if !c2.is_finite() {
            return Err(Error::Config(format!("c2 = {c2} is not finite")));
        }
        Ok(Self {
            n,
            two_n_c1: crate::wrap(two_n_c1, 2 * n) as u32,
            c2,
            n_cp: 0,
            guard: 0,
            oversampling: 1,
            n_sym: 1,
            constellation: Constellation::QAM16,
        })
    }

    pub fn ofdm(n: usize) -> Result<Self> {
        Self::new(n, 0, 0.0)
    }

    pub fn ocdm(n: usize) -> Result<Self> {
        Self::new(n, 1, 0.5 / n as f64)
    }

    /// Parameters of `waveform`; `two_n_c1` and `c2` only matter for AFDM.
    pub fn for_waveform(waveform: Waveform, n: usize, two_n_c1: i64, c2: f64) -> Result<Self> {
        match waveform {
            Waveform::Afdm => Self::new(n, two_n_c1, c2),
            Waveform::Ofdm => Self::ofdm(n),
            Waveform::Ocdm => Self::ocdm(n),
        }
    }

    pub fn with_cpp(mut self, n_cp: usize) -> Self {
        self.n_cp = n_cp;
        self
    }

    /// Guard prefix/suffix length, equal to the pulse half-width `M` in symbols.
    pub fn with_guard(mut self, m: usize) -> Self {
        self.guard = m;
        self
    }

    pub fn with_oversampling(mut self, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::Config("oversampling ratio L must be >= 1".into()));
        }
        self.oversampling = l;
        Ok(self)
    }

    pub fn with_symbols(mut self, n_sym: usize) -> Result<Self> {
        if n_sym == 0 {
            return Err(Error::Config("N_sym must be >= 1".into()));
        }
        self.n_sym = n_sym;
        Ok(self)
    }

    pub fn with_constellation(mut self, c: Constellation) -> Result<Self> {
        c.validate()?;
        self.constellation = c;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn two_n_c1(&self) -> u32 {
        self.two_n_c1
    }
    pub fn c1(&self) -> f64 {
        self.two_n_c1 as f64 / (2 * self.n) as f64
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn n_cp(&self) -> usize {
        self.n_cp
    }
    pub fn guard(&self) -> usize {
        self.guard
    }
    pub fn oversampling(&self) -> usize {
        self.oversampling
    }
    pub fn n_sym(&self) -> usize {
        self.n_sym
    }
    pub fn constellation(&self) -> Constellation {
        self.constellation
    }

    /// Kurtosis of the configured constellation.
    pub fn mu4(&self) -> f64 {
        self.constellation.kurtosis().expect("validated on construction")
    }

    /// Samples per framed symbol at the symbol rate: `N + N_cp + 2M`.
    pub fn symbol_len(&self) -> usize {
        self.n + self.n_cp + 2 * self.guard
    }

    /// Length of an oversampled symbol body, `NL`.
    pub fn body_len(&self) -> usize {
        self.n * self.oversampling
    }

    pub fn is_ofdm(&self) -> bool {
        self.two_n_c1 == 0
    }

    pub fn is_ocdm(&self) -> bool {
        self.two_n_c1 == 1 && (self.c2 - 0.5 / self.n as f64).abs() < 1e-15
    }

    /// `e^{j2π c1 n^2}` evaluated with exact integer reduction.
    fn chirp1(&self, n: i64) -> Complex64 {
        cis_ratio(self.two_n_c1 as i64 * n * n, 2 * self.n)
    }

    fn chirp2(&self, m: usize) -> Complex64 {
        let mm = (m * m) as f64;
        cis_turns(self.c2 * mm - (self.c2 * mm).trunc())
    }

    /// `e^{-j2π c1 (N^2 + 2N·offset)}`, the prefix phase at negative `offset`
    /// and, with `offset = -m`, the suffix phase at `m`.
    fn extension_phase(&self, offset: i64) -> Complex64 {
        let n = self.n as i64;
        cis_ratio(-(self.two_n_c1 as i64) * (n * n + 2 * n * offset), 2 * self.n)
    }

    fn check_len(&self, what: &'static str, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::Dimension { what, expected: self.n, got });
        }
        Ok(())
    }
}

/// Column-major `N × N_sym` block of data symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    n: usize,
    n_sym: usize,
    data: Vec<Complex64>,
}

impl SymbolBlock {
    pub fn new(n: usize, n_sym: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n_sym {
            return Err(Error::Dimension { what: "symbol block", expected: n * n_sym, got: data.len() });
        }
        Ok(Self { n, n_sym, data })
    }

    pub fn from_columns(columns: &[ComplexSignal]) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.len());
        let mut data = Vec::with_capacity(n * columns.len());
        for c in columns {
            if c.len() != n {
                return Err(Error::Dimension { what: "symbol block column", expected: n, got: c.len() });
            }
            data.extend_from_slice(c);
        }
        Ok(Self { n, n_sym: columns.len(), data })
    }

    /// Uniform random block matching `cfg`.
    pub fn random<R: Rng + ?Sized>(cfg: &AfdmConfig, rng: &mut R) -> Self {
        let pts = cfg.constellation.points().expect("validated on construction");
        let data = constellation::draw_from(&pts, cfg.n * cfg.n_sym, rng);
        Self { n: cfg.n, n_sym: cfg.n_sym, data }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.n_sym
    }

    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.n..(k + 1) * self.n]
    }
}

/// Inverse discrete affine Fourier transform of one symbol:
/// `x_n = N^{-1/2} Σ_m s_m e^{j2π(c1 n² + mn/N + c2 m²)}`.
pub fn idaft_modulate(cfg: &AfdmConfig, data: &[Complex64]) -> Result<ComplexSignal> {
    cfg.check_len("IDAFT input", data.len())?;
    let scale = (cfg.n as f64).sqrt().recip();
    let mut buf: Vec<Complex64> = data.iter().enumerate().map(|(m, s)| s * cfg.chirp2(m)).collect();
    fft::inverse_unscaled(&mut buf);
    for (n, v) in buf.iter_mut().enumerate() {
        *v = *v * cfg.chirp1(n as i64) * scale;
    }
    Ok(ComplexSignal::from_vec(buf))
}

/// Forward DAFT, the inverse of [`idaft_modulate`].
pub fn daft_demodulate(cfg: &AfdmConfig, x: &[Complex64]) -> Result<ComplexSignal> {
    cfg.check_len("DAFT input", x.len())?;
    let scale = (cfg.n as f64).sqrt().recip();
    let mut buf: Vec<Complex64> = x.iter().enumerate().map(|(n, v)| v * cfg.chirp1(n as i64).conj()).collect();
    fft::forward(&mut buf);
    for (m, v) in buf.iter_mut().enumerate() {
        *v = *v * cfg.chirp2(m).conj() * scale;
    }
    Ok(ComplexSignal::from_vec(buf))
}

fn prefix_sample(cfg: &AfdmConfig, x: &[Complex64], n: i64) -> Complex64 {
    cfg.extension_phase(n) * x[crate::wrap(n, cfg.n)]
}

fn suffix_sample(cfg: &AfdmConfig, x: &[Complex64], m: i64) -> Complex64 {
    cfg.extension_phase(-m) * x[crate::wrap(m, cfg.n)]
}

/// Prepends the chirp-periodic prefix of length `N_cp`.
pub fn add_cpp(cfg: &AfdmConfig, x: &[Complex64]) -> Result<ComplexSignal> {
    cfg.check_len("CPP input", x.len())?;
    let n_cp = cfg.n_cp as i64;
    let mut out = Vec::with_capacity(cfg.n + cfg.n_cp);
    out.extend((-n_cp..0).map(|n| prefix_sample(cfg, x, n)));
    out.extend_from_slice(x);
    Ok(ComplexSignal::from_vec(out))
}

/// Guard prefix, CPP, body and guard suffix of one symbol.
pub fn add_gps(cfg: &AfdmConfig, x: &[Complex64]) -> Result<ComplexSignal> {
    cfg.check_len("GPS input", x.len())?;
    let mut out = Vec::with_capacity(cfg.symbol_len());
    push_gps(cfg, x, &mut out);
    Ok(ComplexSignal::from_vec(out))
}

fn push_gps(cfg: &AfdmConfig, x: &[Complex64], out: &mut Vec<Complex64>) {
    let (n, n_cp, m) = (cfg.n as i64, cfg.n_cp as i64, cfg.guard as i64);
    out.extend((-n_cp - m..0).map(|i| prefix_sample(cfg, x, i)));
    out.extend_from_slice(x);
    out.extend((n..n + m).map(|i| suffix_sample(cfg, x, i)));
}

/// Modulates every column, adds the guards and concatenates the symbols.
pub fn build_frame(cfg: &AfdmConfig, block: &SymbolBlock) -> Result<ComplexSignal> {
    if block.n != cfg.n {
        return Err(Error::Dimension { what: "symbol block rows", expected: cfg.n, got: block.n });
    }
    if block.n_sym != cfg.n_sym {
        return Err(Error::Dimension { what: "symbol block columns", expected: cfg.n_sym, got: block.n_sym });
    }
    let mut out = Vec::with_capacity(cfg.symbol_len() * cfg.n_sym);
    for k in 0..cfg.n_sym {
        let x = idaft_modulate(cfg, block.column(k))?;
        push_gps(cfg, &x, &mut out);
    }
    Ok(ComplexSignal::from_vec(out))
}

/// Modulated bodies of every column, without guards.
pub fn modulate_block(cfg: &AfdmConfig, block: &SymbolBlock) -> Result<Vec<ComplexSignal>> {
    (0..block.n_sym).map(|k| idaft_modulate(cfg, block.column(k))).collect()
}
