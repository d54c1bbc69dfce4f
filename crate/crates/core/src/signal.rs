use alloc::vec::Vec;
use core::ops::Deref;

use num_complex::Complex64;

use crate::{Error, Result};

/// A finite complex baseband sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
}

impl ComplexSignal {
    /// Wraps `samples`, rejecting NaN or infinite values.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::Config(alloc::format!("non-finite sample at index {i}")));
        }
        Ok(Self { samples })
    }

    pub(crate) fn from_vec(samples: Vec<Complex64>) -> Self {
        debug_assert!(samples.iter().all(|s| s.re.is_finite() && s.im.is_finite()));
        Self { samples }
    }

    pub fn zeros(len: usize) -> Self {
        Self { samples: alloc::vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.samples
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }
}

impl Deref for ComplexSignal {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.samples
    }
}

impl TryFrom<Vec<Complex64>> for ComplexSignal {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}
