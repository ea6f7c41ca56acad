//! Shared protocol-output record.

use crate::error::{Error, Result};

/// Named protocol output: outcome distribution, information values, success
/// probability, and free-form metadata. Every harness record re-validates
/// these invariants before emission.
#[derive(Debug, Clone, Default)]
pub struct ScenarioResult {
    pub protocol: String,
    /// Labeled outcome probabilities (possibly empty for pure-metric runs).
    pub outcomes: Vec<(String, f64)>,
    pub fi: Option<f64>,
    pub qfi: Option<f64>,
    pub success_prob: Option<f64>,
    /// Sorted key/value pairs; kept as a Vec for deterministic output order.
    pub metadata: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl ScenarioResult {
    pub fn new(protocol: impl Into<String>) -> Self {
        Self {
            protocol: protocol.into(),
            ..Self::default()
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    /// Re-checks the module invariants this record is supposed to satisfy.
    pub fn validate(&self) -> Result<()> {
        if !self.outcomes.is_empty() {
            let mut sum = 0.0;
            for (label, p) in &self.outcomes {
                if *p < -1e-12 || !p.is_finite() {
                    return Err(Error::InvalidDistribution(format!(
                        "outcome `{label}` has probability {p}"
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidDistribution(format!("outcomes sum to {sum}")));
            }
        }
        for (name, v) in [("fi", self.fi), ("qfi", self.qfi)] {
            if let Some(v) = v {
                if v < -1e-9 {
                    return Err(Error::InvalidParameter(format!("{name} = {v} < 0")));
                }
            }
        }
        if let Some(p) = self.success_prob {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "success probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}
