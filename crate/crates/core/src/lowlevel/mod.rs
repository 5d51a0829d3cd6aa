//! Per-skill low-level policies trained by advantage-weighted regression on
//! skill segments and on compiled goal trajectories.

mod awr;
mod bank;
mod buffer;
mod policy;

use serde::{Deserialize, Serialize};

use crate::nn::EncoderSpec;

pub use awr::{awr_loss_and_grad, awr_weight, AwrSample};
pub use bank::{LlTrainStats, LowLevelBank, Segment};
pub use buffer::{discounted_returns, LlRecord, ReplayBuffer, TrajEnd};
pub use policy::{ActMode, LlNet, LlPolicy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LowLevelConfig {
    pub encoder: EncoderSpec,
    pub gamma: f64,
    pub beta_awr: f64,
    pub w_max: f64,
    pub lr: f64,
    /// New transitions in a skill's buffer that trigger an update.
    pub update_every: usize,
    pub buffer_capacity: usize,
    pub batch_size: usize,
    /// Gradient steps per update, in passes over the new transitions.
    pub epochs: f64,
    pub critic_coef: f64,
    pub grad_clip: f64,
    /// Store compiled trajectories of failed goal attempts too.
    pub relabel_failures: bool,
}

impl Default for LowLevelConfig {
    fn default() -> Self {
        Self {
            encoder: EncoderSpec::ResNet { channels: vec![16, 32, 32], hidden: vec![256, 64] },
            gamma: 0.95,
            beta_awr: 1.0,
            w_max: 20.0,
            lr: 1e-4,
            update_every: 2496,
            buffer_capacity: 100_000,
            batch_size: 256,
            epochs: 1.0,
            critic_coef: 0.5,
            grad_clip: 1.0,
            relabel_failures: true,
        }
    }
}
