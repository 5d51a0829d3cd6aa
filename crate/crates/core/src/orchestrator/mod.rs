//! Goal attempts, parallel collection and the training loop.

mod attempt;
mod trainer;

pub use attempt::{Agent, Attempt, GoalSpec, HlStep, Modes};
pub use trainer::{catalog_for, derive_seed, EnvSlot, Trainer};
