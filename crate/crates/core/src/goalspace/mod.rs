//! Goal catalog, precedence, synonym lexicon, compositional goals and the
//! word-level vocabulary used to decode skill names.

mod catalog;
mod compose;
mod lexicon;
mod vocab;

pub use catalog::{Goal, GoalCatalog, GoalId, GoalKind, GoalRecord};
pub use compose::{make_n_compositional, CountingVerifier};
pub use lexicon::{expand_synonyms, Lexicon};
pub use vocab::{SkillVocabulary, Token, EOS};

/// Index of a goal in its catalog; skills are goals the high level can call.
pub type SkillId = usize;
