//! A seeded Crafter-like gridworld restricted to the wood/stone/coal tree.

mod action;
mod caption;
mod difficulty;
mod generate;
mod observation;
mod rules;
mod state;
mod tile;
mod verifier;

pub use action::ElementaryAction;
pub use caption::{caption, compass, sightings, CaptionContext, Sighting, GAME_SENTENCE};
pub use difficulty::{decomposition, difficulty, difficulty_of, Decomposition, Difficulty};
pub use generate::{generate_world, generate_world_with, WorldGenConfig, MIN_SIDE};
pub use observation::{VisualObs, DEFAULT_VIEW};
pub use rules::{step, stepped, StepView, SAPLING_CHANCE};
pub use state::{Direction, Inventory, Item, Placement, Pos, WorldState};
pub use tile::TileKind;
pub use verifier::{Achievement, VerifierId};
