use alloc::format;

use crate::error::{Error, Result};

/// Admissible finite-difference steps.
pub const STEP_RANGE: (f64, f64) = (1e-8, 1e-1);

/// Ratio of the step used by stencils that divide by `h²` to the base step.
pub const NESTED_STEP_FACTOR: f64 = 10.0;

/// Sampling and tolerance settings shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDConfig {
    pub h: f64,
    pub richardson: bool,
    pub samples: usize,
    pub seed: u64,
    pub tol_algebraic: f64,
    pub tol_fd: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        Self {
            h: 1e-4,
            richardson: true,
            samples: 100,
            seed: 0,
            tol_algebraic: 1e-9,
            tol_fd: 1e-5,
        }
    }
}

impl FDConfig {
    /// Step for second-order stencils, capped at the top of [`STEP_RANGE`].
    pub fn nested_step(&self) -> f64 {
        (self.h * NESTED_STEP_FACTOR).min(STEP_RANGE.1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h >= STEP_RANGE.0 && self.h <= STEP_RANGE.1) {
            return Err(Error::InvalidConfig(format!(
                "fd step {} outside [{:e}, {:e}]",
                self.h, STEP_RANGE.0, STEP_RANGE.1
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        for (name, v) in [("tol_algebraic", self.tol_algebraic), ("tol_fd", self.tol_fd)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
