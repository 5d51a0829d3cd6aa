pub mod cli;
pub mod competence;
pub mod craftworld;
pub mod error;
pub mod evaluation;
pub mod goalspace;
pub mod highlevel;
pub mod lowlevel;
pub mod nn;
pub mod orchestrator;
pub mod persist;
pub mod sampler;
pub mod skillspace;

pub use error::{Error, Result};
