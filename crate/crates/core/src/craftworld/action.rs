use serde::{Deserialize, Serialize};

use super::state::Direction;

/// The 16 primitive actions of the environment; also the low-level output head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum ElementaryAction {
    MoveUp,
    MoveDown,
    MoveLeft,
    MoveRight,
    ChopTree,
    ChopBush,
    ChopGrass,
    ExtractStone,
    ExtractCoal,
    PlaceTable,
    PlaceFurnace,
    PlaceStone,
    PlacePlant,
    CraftWoodPickaxe,
    CraftWoodSword,
    Noop,
}

impl ElementaryAction {
    pub const COUNT: usize = 16;

    pub const ALL: [ElementaryAction; Self::COUNT] = [
        ElementaryAction::MoveUp,
        ElementaryAction::MoveDown,
        ElementaryAction::MoveLeft,
        ElementaryAction::MoveRight,
        ElementaryAction::ChopTree,
        ElementaryAction::ChopBush,
        ElementaryAction::ChopGrass,
        ElementaryAction::ExtractStone,
        ElementaryAction::ExtractCoal,
        ElementaryAction::PlaceTable,
        ElementaryAction::PlaceFurnace,
        ElementaryAction::PlaceStone,
        ElementaryAction::PlacePlant,
        ElementaryAction::CraftWoodPickaxe,
        ElementaryAction::CraftWoodSword,
        ElementaryAction::Noop,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            ElementaryAction::MoveUp => Some(Direction::North),
            ElementaryAction::MoveDown => Some(Direction::South),
            ElementaryAction::MoveLeft => Some(Direction::West),
            ElementaryAction::MoveRight => Some(Direction::East),
            _ => None,
        }
    }

    pub fn is_move(self) -> bool {
        self.direction().is_some()
    }

    /// Identifier used in configuration files and goal catalogs.
    pub fn key(self) -> &'static str {
        match self {
            ElementaryAction::MoveUp => "move_up",
            ElementaryAction::MoveDown => "move_down",
            ElementaryAction::MoveLeft => "move_left",
            ElementaryAction::MoveRight => "move_right",
            ElementaryAction::ChopTree => "chop_tree",
            ElementaryAction::ChopBush => "chop_bush",
            ElementaryAction::ChopGrass => "chop_grass",
            ElementaryAction::ExtractStone => "extract_stone",
            ElementaryAction::ExtractCoal => "extract_coal",
            ElementaryAction::PlaceTable => "place_table",
            ElementaryAction::PlaceFurnace => "place_furnace",
            ElementaryAction::PlaceStone => "place_stone",
            ElementaryAction::PlacePlant => "place_plant",
            ElementaryAction::CraftWoodPickaxe => "craft_wood_pickaxe",
            ElementaryAction::CraftWoodSword => "craft_wood_sword",
            ElementaryAction::Noop => "noop",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.key() == key)
    }

    /// Text the high level uses to call this action as a skill. Distinct from
    /// every achievement text ("build table" vs the goal "place table").
    pub fn text(self) -> &'static str {
        match self {
            ElementaryAction::MoveUp => "move up",
            ElementaryAction::MoveDown => "move down",
            ElementaryAction::MoveLeft => "move left",
            ElementaryAction::MoveRight => "move right",
            ElementaryAction::ChopTree => "chop tree",
            ElementaryAction::ChopBush => "chop bush",
            ElementaryAction::ChopGrass => "chop grass",
            ElementaryAction::ExtractStone => "extract stone",
            ElementaryAction::ExtractCoal => "extract coal",
            ElementaryAction::PlaceTable => "build table",
            ElementaryAction::PlaceFurnace => "build furnace",
            ElementaryAction::PlaceStone => "put stone",
            ElementaryAction::PlacePlant => "put plant",
            ElementaryAction::CraftWoodPickaxe => "craft wood pickaxe",
            ElementaryAction::CraftWoodSword => "craft wood sword",
            ElementaryAction::Noop => "noop",
        }
    }

    /// Requirement hint shown next to the action in captions.
    pub fn requirement(self) -> Option<&'static str> {
        match self {
            ElementaryAction::ChopTree => Some("require facing tree"),
            ElementaryAction::ChopBush => Some("require facing bush"),
            ElementaryAction::ChopGrass => Some("require facing grass"),
            ElementaryAction::ExtractStone => Some("require 1 wood pickaxe in your inventory while facing stone"),
            ElementaryAction::ExtractCoal => Some("require 1 wood pickaxe in your inventory while facing coal"),
            ElementaryAction::PlaceTable => Some("require 2 woods in your inventory"),
            ElementaryAction::PlaceFurnace => Some("require 4 stones in your inventory"),
            ElementaryAction::PlaceStone => Some("require 1 stone in your inventory"),
            ElementaryAction::PlacePlant => Some("require 1 sapling in your inventory"),
            ElementaryAction::CraftWoodPickaxe => Some("require 1 wood in your inventory while facing a table"),
            ElementaryAction::CraftWoodSword => Some("require 1 wood in your inventory while facing a table"),
            _ => None,
        }
    }
}
