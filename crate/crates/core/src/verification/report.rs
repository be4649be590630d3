use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::config::FDConfig;
use crate::error::{Error, Result};

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    /// The identity being checked, as an ASCII formula.
    pub anchor: String,
    /// Descriptor of the space the check ran on.
    pub space: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: &str,
        anchor: &str,
        space: &str,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            space: space.into(),
            samples,
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        (&self.space, &self.name, &self.anchor, self.samples)
            .cmp(&(&other.space, &other.name, &other.anchor, other.samples))
            .then(self.max_residual.total_cmp(&other.max_residual))
            .then(self.tolerance.total_cmp(&other.tolerance))
    }
}

/// Records of a suite run, kept sorted by `(space, name, anchor)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    space: String,
    config: FDConfig,
    records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(space: &str, config: FDConfig, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(CheckRecord::order);
        Self {
            space: space.into(),
            config,
            records,
        }
    }

    pub fn space(&self) -> &str {
        &self.space
    }

    pub fn config(&self) -> &FDConfig {
        &self.config
    }

    pub fn records(&self) -> &[CheckRecord] {
        &self.records
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// True iff every record passes.
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// Union of two reports run with the same configuration. Commutative and
    /// associative: records are re-sorted and space descriptors are joined
    /// in sorted order.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch);
        }
        let mut spaces: Vec<&str> = self.space.split("; ").chain(other.space.split("; ")).collect();
        spaces.sort_unstable();
        spaces.dedup();
        let mut records = self.records.clone();
        records.extend(other.records.iter().cloned());
        Ok(Self::new(&spaces.join("; "), self.config, records))
    }
}
