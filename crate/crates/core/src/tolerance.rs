use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every rank, kernel and order decision.
///
/// Two quantities are derived from it:
/// * the PSD floor `rel * scale`, where `scale = max(1, largest |eigenvalue|)`;
/// * the rank cutoff `rel * max|eigenvalue| + abs`; eigenvalues at or below it count as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-10;
    pub const DEFAULT_ABS: f64 = 1e-12;

    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && abs > 0.0 && rel.is_finite() && abs.is_finite()) {
            return Err(Error::InvalidTolerance { rel, abs });
        }
        Ok(Tolerance { rel, abs })
    }

    /// Same absolute floor, different relative threshold.
    pub fn with_rel(rel: f64) -> Result<Self> {
        Self::new(rel, Self::DEFAULT_ABS)
    }

    pub fn psd_floor(&self, scale: f64) -> f64 {
        self.rel * scale
    }

    pub fn rank_cutoff(&self, max_abs_eigenvalue: f64) -> f64 {
        self.rel * max_abs_eigenvalue + self.abs
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: Self::DEFAULT_REL,
            abs: Self::DEFAULT_ABS,
        }
    }
}

/// `max(1, largest |eigenvalue|)`.
pub fn scale_of(max_abs_eigenvalue: f64) -> f64 {
    max_abs_eigenvalue.max(1.0)
}
