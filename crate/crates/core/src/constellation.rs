//! Unit-power, rotationally symmetric constellations.
//!
//! Alphabets are normalized so that the mean of `|s|^2` is exactly one, the
//! mean point is zero and the mean of `s^2` (pseudo-mean) is zero. Symbols
//! are drawn uniformly by index; labeling is irrelevant here.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use rand::Rng;

use crate::{rng, ComplexSignal, Error, Result};

/// Constellation family and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constellation {
    /// `order` points on the unit circle, first point at angle π/order.
    Psk(u32),
    /// Square QAM with `order` points.
    Qam(u32),
}

impl Constellation {
    pub const QAM16: Constellation = Constellation::Qam(16);
    pub const QPSK: Constellation = Constellation::Psk(4);

    pub fn order(&self) -> u32 {
        match *self {
            Constellation::Psk(m) | Constellation::Qam(m) => m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.order();
        if !m.is_power_of_two() {
            return Err(Error::Config(format!("constellation order {m} is not a power of two")));
        }
        match *self {
            // BPSK has E{s^2} = 1, which breaks the zero pseudo-variance assumption.
            Constellation::Psk(m) if m < 4 => Err(Error::Config(format!(
                "PSK order {m} has nonzero pseudo-mean; use order >= 4"
            ))),
            Constellation::Qam(m) if m.trailing_zeros() % 2 != 0 || m < 4 => Err(Error::Config(
                format!("QAM order {m} is not a perfect square >= 4"),
            )),
            _ => Ok(()),
        }
    }

    /// The full alphabet, scaled to unit average power.
    pub fn points(&self) -> Result<Vec<Complex64>> {
        self.validate()?;
        Ok(match *self {
            Constellation::Psk(m) => (0..m)
                .map(|k| {
                    let theta = PI / m as f64 + 2.0 * PI * k as f64 / m as f64;
                    Complex64::from_polar(1.0, theta)
                })
                .collect(),
            Constellation::Qam(m) => {
                let side = 1u32 << (m.trailing_zeros() / 2);
                let scale = (2.0 * (m as f64 - 1.0) / 3.0).sqrt().recip();
                let level = |i: u32| (2.0 * i as f64 - (side as f64 - 1.0)) * scale;
                (0..side)
                    .flat_map(|i| (0..side).map(move |q| Complex64::new(level(i), level(q))))
                    .collect()
            }
        })
    }

    /// Fourth moment `E|s|^4` of the unit-power alphabet.
    pub fn kurtosis(&self) -> Result<f64> {
        let pts = self.points()?;
        Ok(pts.iter().map(|p| p.norm_sqr() * p.norm_sqr()).sum::<f64>() / pts.len() as f64)
    }

    /// `count` i.i.d. uniform draws from the alphabet.
    pub fn draw<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<ComplexSignal> {
        let pts = self.points()?;
        Ok(ComplexSignal::from_vec(draw_from(&pts, count, rng)))
    }
}

pub(crate) fn draw_from<R: Rng + ?Sized>(pts: &[Complex64], count: usize, rng: &mut R) -> Vec<Complex64> {
    (0..count).map(|_| pts[rng.random_range(0..pts.len())]).collect()
}

/// Deterministic draw of `count` symbols from a generator seeded with `seed`.
pub fn draw_symbols(constellation: Constellation, count: usize, seed: u64) -> Result<ComplexSignal> {
    constellation.draw(count, &mut rng::seeded(seed))
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constellation::Psk(m) => write!(f, "psk{m}"),
            Constellation::Qam(m) => write!(f, "qam{m}"),
        }
    }
}

impl core::str::FromStr for Constellation {
    type Err = Error;

    /// Parses `qam16`, `psk8`, `qpsk`, ...
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let parsed = if lower == "qpsk" {
            Some(Constellation::Psk(4))
        } else if let Some(rest) = lower.strip_prefix("qam") {
            rest.parse().ok().map(Constellation::Qam)
        } else if let Some(rest) = lower.strip_prefix("psk") {
            rest.parse().ok().map(Constellation::Psk)
        } else {
            None
        };
        let c = parsed.ok_or_else(|| Error::Config(format!("unknown modulation '{s}'")))?;
        c.validate()?;
        Ok(c)
    }
}
