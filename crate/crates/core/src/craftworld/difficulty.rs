use std::fmt;

use serde::{Deserialize, Serialize};

use super::verifier::Achievement;
use crate::{Error, Result};

/// A difficulty score counted in half units, so 2.5 is stored as 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Difficulty(u32);

impl Difficulty {
    pub fn from_halves(halves: u32) -> Self {
        Self(halves)
    }

    pub fn halves(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// Subgoal decomposition of a goal from a fresh world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub go_to: u32,
    pub collect: u32,
    pub place: u32,
    pub make: u32,
    pub score: Difficulty,
}

const fn row(go_to: u32, collect: u32, place: u32, make: u32, halves: u32) -> Decomposition {
    Decomposition { go_to, collect, place, make, score: Difficulty(halves) }
}

/// Decomposition and score of an achievement; `None` outside the tree.
///
/// Scores are tabulated rather than derived: "collect wood" is rated like
/// "go to tree" (0.5) since chopping needs no equipment.
pub fn decomposition(goal: Achievement) -> Option<Decomposition> {
    use Achievement as A;
    Some(match goal {
        A::GoToTree | A::GoToStone | A::GoToCoal => row(1, 0, 0, 0, 1),
        A::CollectWood => row(0, 1, 0, 0, 1),
        A::PlaceTable | A::GoToTable => row(0, 2, 1, 0, 5),
        A::MakeWoodPickaxe => row(0, 3, 1, 1, 8),
        A::CollectStone | A::CollectCoal => row(0, 4, 1, 1, 10),
        A::PlaceFurnace | A::GoToFurnace => row(0, 7, 2, 1, 17),
        A::MakeWoodSword => return None,
    })
}

pub fn difficulty(goal: Achievement) -> Option<Difficulty> {
    decomposition(goal).map(|d| d.score)
}

/// Looks a goal up by its canonical text.
pub fn difficulty_of(text: &str) -> Result<Difficulty> {
    Achievement::ALL
        .into_iter()
        .find(|a| a.text() == text)
        .and_then(difficulty)
        .ok_or_else(|| Error::lookup("goal", text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_halves() {
        assert_eq!(Difficulty(17).to_string(), "8.5");
        assert_eq!(Difficulty(8).to_string(), "4");
    }

    #[test]
    fn unknown_goal_is_a_lookup_error() {
        assert!(matches!(difficulty_of("make wood sword"), Err(Error::Lookup { .. })));
        assert!(matches!(difficulty_of("fly"), Err(Error::Lookup { .. })));
    }
}
