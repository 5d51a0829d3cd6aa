//! Event-based goal verifiers. A verifier fires on the transition that
//! completes its goal, never on a standing state.

use serde::{Deserialize, Serialize};

use super::action::ElementaryAction;
use super::rules::StepView;
use super::state::Item;
use super::tile::TileKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Achievement {
    GoToTree,
    CollectWood,
    PlaceTable,
    GoToTable,
    MakeWoodPickaxe,
    GoToStone,
    CollectStone,
    GoToCoal,
    CollectCoal,
    PlaceFurnace,
    GoToFurnace,
    /// Not part of the training tree; used to probe transfer from the pickaxe.
    MakeWoodSword,
}

impl Achievement {
    /// The eleven achievements of the tree, in catalog order.
    pub const TREE: [Achievement; 11] = [
        Achievement::GoToTree,
        Achievement::CollectWood,
        Achievement::PlaceTable,
        Achievement::GoToTable,
        Achievement::MakeWoodPickaxe,
        Achievement::GoToStone,
        Achievement::CollectStone,
        Achievement::GoToCoal,
        Achievement::CollectCoal,
        Achievement::PlaceFurnace,
        Achievement::GoToFurnace,
    ];

    pub const ALL: [Achievement; 12] = [
        Achievement::GoToTree,
        Achievement::CollectWood,
        Achievement::PlaceTable,
        Achievement::GoToTable,
        Achievement::MakeWoodPickaxe,
        Achievement::GoToStone,
        Achievement::CollectStone,
        Achievement::GoToCoal,
        Achievement::CollectCoal,
        Achievement::PlaceFurnace,
        Achievement::GoToFurnace,
        Achievement::MakeWoodSword,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Achievement::GoToTree => "go_to_tree",
            Achievement::CollectWood => "collect_wood",
            Achievement::PlaceTable => "place_table",
            Achievement::GoToTable => "go_to_table",
            Achievement::MakeWoodPickaxe => "make_wood_pickaxe",
            Achievement::GoToStone => "go_to_stone",
            Achievement::CollectStone => "collect_stone",
            Achievement::GoToCoal => "go_to_coal",
            Achievement::CollectCoal => "collect_coal",
            Achievement::PlaceFurnace => "place_furnace",
            Achievement::GoToFurnace => "go_to_furnace",
            Achievement::MakeWoodSword => "make_wood_sword",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.key() == key)
    }

    pub fn text(self) -> String {
        self.key().replace('_', " ")
    }

    /// The tile a "go to" achievement targets.
    pub fn go_to_target(self) -> Option<TileKind> {
        match self {
            Achievement::GoToTree => Some(TileKind::Tree),
            Achievement::GoToTable => Some(TileKind::Table),
            Achievement::GoToStone => Some(TileKind::Stone),
            Achievement::GoToCoal => Some(TileKind::Coal),
            Achievement::GoToFurnace => Some(TileKind::Furnace),
            _ => None,
        }
    }

    fn fired(self, prev: &StepView, next: &StepView) -> bool {
        let gained = |item: Item| next.inventory.get(item) > prev.inventory.get(item);
        let placed = |kind: TileKind| next.placements > prev.placements && next.last_placed == Some(kind);
        match self {
            Achievement::CollectWood => gained(Item::Wood),
            Achievement::CollectStone => gained(Item::Stone),
            Achievement::CollectCoal => gained(Item::Coal),
            Achievement::MakeWoodPickaxe => gained(Item::WoodPickaxe),
            Achievement::MakeWoodSword => gained(Item::WoodSword),
            Achievement::PlaceTable => placed(TileKind::Table),
            Achievement::PlaceFurnace => placed(TileKind::Furnace),
            go_to => {
                let target = go_to.go_to_target();
                next.faced == target && prev.faced != target
            }
        }
    }
}

/// Identity of a verifier: an achievement, or the execution of an elementary action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VerifierId {
    Achievement(Achievement),
    Action(ElementaryAction),
}

impl VerifierId {
    /// Stable text key; action verifiers are prefixed with `action.`.
    pub fn key(self) -> String {
        match self {
            VerifierId::Achievement(a) => a.key().to_owned(),
            VerifierId::Action(a) => format!("action.{}", a.key()),
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        match key.strip_prefix("action.") {
            Some(action) => ElementaryAction::from_key(action).map(VerifierId::Action),
            None => Achievement::from_key(key).map(VerifierId::Achievement),
        }
    }
}

/// Events fired by a transition. The executed action always fires its own verifier.
pub(crate) fn fired_events(prev: &StepView, action: ElementaryAction, next: &StepView) -> Vec<VerifierId> {
    let mut events = vec![VerifierId::Action(action)];
    events.extend(Achievement::ALL.into_iter().filter(|a| a.fired(prev, next)).map(VerifierId::Achievement));
    events
}
