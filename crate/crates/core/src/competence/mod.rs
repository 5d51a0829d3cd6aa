//! Learned success-rate estimator over (state, skill) pairs.

mod buffer;
mod estimator;

use serde::{Deserialize, Serialize};

pub use buffer::{EstimatorSample, SampleBuffer};
pub use estimator::{bce_loss_and_grad, CompetenceEstimator, EstimatorNet, EstimatorSnapshot, EstimatorStats};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompetenceConfig {
    pub hidden: Vec<usize>,
    pub lr: f64,
    /// New samples that trigger a training pass.
    pub train_every: usize,
    pub epochs: usize,
    pub batch_size: usize,
    /// Collection cycles kept in the sample buffer.
    pub retention_cycles: usize,
    /// Samples taken from the start of each execution.
    pub samples_per_execution: usize,
    /// Caps the samples visited per training pass; `None` visits the whole buffer.
    pub max_samples_per_pass: Option<usize>,
}

impl Default for CompetenceConfig {
    fn default() -> Self {
        Self {
            hidden: vec![128, 128],
            lr: 1e-4,
            train_every: 256,
            epochs: 1,
            batch_size: 32,
            retention_cycles: 3,
            samples_per_execution: 12,
            max_samples_per_pass: None,
        }
    }
}
