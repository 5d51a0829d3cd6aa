//! High-level policy: constrained token decoding of skill names, a value head,
//! and a token-level clipped policy-gradient update with a KL anchor.

mod features;
mod policy;
mod ppo;
mod trie;

pub use features::{context_dim, context_features};
pub use policy::{Decoded, HighLevelNet, MAX_TOKENS};
pub use ppo::{gae, ppo_loss_and_grad, HighLevelPolicy, HlTrainStats, HlTransition, PpoConfig, PpoLoss, PpoSample};
pub use trie::SkillTrie;
