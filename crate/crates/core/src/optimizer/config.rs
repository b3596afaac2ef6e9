use serde::{Deserialize, Serialize};

use super::cost::GradientMode;
use super::lbfgsb::LbfgsConfig;
use super::sampling::SequenceKind;
use crate::error::{Error, Result};

/// Everything that controls a gate search. Every field has a default, so a
/// partial JSON document is a valid configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub samples: usize,
    pub sequence: SequenceKind,
    pub sample_seed: u64,
    pub memory_pairs: usize,
    pub max_iterations: usize,
    pub projected_gradient_tolerance: f64,
    pub relative_reduction_tolerance: f64,
    pub gradient_mode: GradientMode,
    /// Central-difference step, also used where dual derivatives fall back.
    pub difference_step: f64,
    pub restarts: usize,
    pub restart_seed: u64,
    pub threads: usize,
    /// Largest accepted number of recurrence iterations.
    pub max_depth: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            samples: 512,
            sequence: SequenceKind::LowDiscrepancy,
            sample_seed: 0,
            memory_pairs: 10,
            max_iterations: 500,
            projected_gradient_tolerance: 1e-8,
            relative_reduction_tolerance: 1e-12,
            gradient_mode: GradientMode::Dual,
            difference_step: 1e-6,
            restarts: 20,
            restart_seed: 0,
            threads: 1,
            max_depth: 4,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("samples", self.samples),
            ("memory_pairs", self.memory_pairs),
            ("max_iterations", self.max_iterations),
            ("threads", self.threads),
            ("max_depth", self.max_depth),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be positive")));
        }
        if !(self.projected_gradient_tolerance > 0.0) {
            return Err(Error::Config("projected_gradient_tolerance must be positive".into()));
        }
        if !(self.relative_reduction_tolerance >= 0.0) {
            return Err(Error::Config("relative_reduction_tolerance must be non-negative".into()));
        }
        if !(1e-8..=1e-4).contains(&self.difference_step) {
            return Err(Error::Config(format!(
                "difference_step {} outside [1e-8, 1e-4]",
                self.difference_step
            )));
        }
        Ok(())
    }

    pub fn lbfgs(&self) -> LbfgsConfig {
        LbfgsConfig {
            memory: self.memory_pairs,
            max_iterations: self.max_iterations,
            projected_gradient_tolerance: self.projected_gradient_tolerance,
            relative_reduction_tolerance: self.relative_reduction_tolerance,
        }
    }
}
