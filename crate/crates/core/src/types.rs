//! Data types shared by the solvers.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// One eigenvalue with its index and normalized boundary residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: i64,
    pub z: f64,
    pub residual: f64,
}

/// Indexed, strictly increasing eigenvalues.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenSpectrum {
    pub levels: Vec<Level>,
}

impl EigenSpectrum {
    /// Checks that indices are contiguous and values strictly increasing.
    pub fn validate(&self) -> Result<()> {
        for w in self.levels.windows(2) {
            if w[1].n != w[0].n + 1 {
                return Err(Error::InvalidParameter(format!(
                    "index gap between {} and {}",
                    w[0].n, w[1].n
                )));
            }
            if !(w[1].z > w[0].z) {
                return Err(Error::InvalidParameter(format!(
                    "levels {} and {} not increasing",
                    w[0].n, w[1].n
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.z).collect()
    }

    pub fn get(&self, n: i64) -> Option<&Level> {
        self.levels.iter().find(|l| l.n == n)
    }
}

/// Samples of one or two solution components on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSample {
    pub r: Vec<f64>,
    pub components: Vec<Vec<Complex64>>,
}

/// A defect estimate with a spread-based uncertainty and the per-level values it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectEstimate {
    pub value: f64,
    pub uncertainty: f64,
    pub per_level: Vec<(i64, f64)>,
}
