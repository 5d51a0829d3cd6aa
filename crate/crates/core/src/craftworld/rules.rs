use rand::Rng;

use super::action::ElementaryAction;
use super::state::{Item, Placement, WorldState};
use super::tile::TileKind;
use super::verifier::{fired_events, VerifierId};

/// Probability that chopping grass yields a sapling.
pub const SAPLING_CHANCE: f64 = 0.1;

/// Applies `action` in place and returns the verifier events it fired.
/// Actions whose requirements are not met only advance the step counters.
pub fn step(state: &mut WorldState, action: ElementaryAction) -> Vec<VerifierId> {
    let prev = StepView::of(state);
    apply(state, action);
    state.ll_step_count += 1;
    state.episode_step_count += 1;
    debug_assert!(state.check_invariants().is_ok());
    fired_events(&prev, action, &StepView::of(state))
}

/// Pure variant of [`step`].
pub fn stepped(state: &WorldState, action: ElementaryAction) -> (WorldState, Vec<VerifierId>) {
    let mut next = state.clone();
    let events = step(&mut next, action);
    (next, events)
}

/// The slice of a state verifiers look at.
#[derive(Clone, Debug, PartialEq)]
pub struct StepView {
    pub faced: Option<TileKind>,
    pub inventory: super::state::Inventory,
    pub placements: usize,
    pub last_placed: Option<TileKind>,
}

impl StepView {
    pub fn of(s: &WorldState) -> Self {
        Self { faced: s.faced(), inventory: s.inventory, placements: s.placements.len(), last_placed: s.placements.last().map(|p| p.kind) }
    }
}

fn apply(state: &mut WorldState, action: ElementaryAction) {
    use ElementaryAction as A;
    if let Some(dir) = action.direction() {
        state.agent_facing = dir;
        let target = state.agent_pos.step(dir);
        if state.tile(target).is_some_and(TileKind::is_walkable) {
            state.agent_pos = target;
        }
        return;
    }
    let front = state.facing_pos();
    let Some(faced) = state.tile(front) else {
        return;
    };
    let inv = &mut state.inventory;
    match action {
        A::ChopTree if faced == TileKind::Tree => inv.add(Item::Wood, 1),
        A::ChopBush if faced == TileKind::Bush => {
            inv.add(Item::Sapling, 1);
            state.set_tile(front, TileKind::Grass);
        }
        A::ChopGrass if faced == TileKind::Grass => {
            if state.rng.gen::<f64>() < SAPLING_CHANCE {
                state.inventory.add(Item::Sapling, 1);
            }
        }
        A::ExtractStone if faced == TileKind::Stone && inv.get(Item::WoodPickaxe) >= 1 => {
            inv.add(Item::Stone, 1);
            state.set_tile(front, TileKind::Path);
        }
        A::ExtractCoal if faced == TileKind::Coal && inv.get(Item::WoodPickaxe) >= 1 => {
            inv.add(Item::Coal, 1);
            state.set_tile(front, TileKind::Path);
        }
        A::PlaceTable if faced.is_buildable() && inv.take(Item::Wood, 2) => place(state, front, TileKind::Table),
        A::PlaceFurnace if faced.is_buildable() && inv.take(Item::Stone, 4) => place(state, front, TileKind::Furnace),
        A::PlaceStone if (faced.is_buildable() || faced == TileKind::Water) && inv.take(Item::Stone, 1) => {
            place(state, front, TileKind::PlacedStone)
        }
        A::PlacePlant if faced == TileKind::Grass && inv.take(Item::Sapling, 1) => place(state, front, TileKind::Plant),
        A::CraftWoodPickaxe if faced == TileKind::Table && inv.take(Item::Wood, 1) => inv.add(Item::WoodPickaxe, 1),
        A::CraftWoodSword if faced == TileKind::Table && inv.take(Item::Wood, 1) => inv.add(Item::WoodSword, 1),
        _ => {}
    }
}

fn place(state: &mut WorldState, pos: super::state::Pos, kind: TileKind) {
    state.set_tile(pos, kind);
    state.placements.push(Placement { kind, pos });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::state::{Direction, Pos};
    use crate::craftworld::verifier::Achievement;
    use crate::craftworld::generate_world;

    /// 7x7 all-grass world with the agent in the middle facing south.
    fn blank() -> WorldState {
        let mut w = generate_world(0, 7).unwrap();
        w.grid.iter_mut().for_each(|t| *t = TileKind::Grass);
        w.agent_pos = Pos::new(3, 3);
        w.agent_facing = Direction::South;
        w
    }

    #[test]
    fn chopping_a_tree_collects_wood() {
        let mut w = blank();
        w.set_tile(Pos::new(3, 4), TileKind::Tree);
        let ev = step(&mut w, ElementaryAction::ChopTree);
        assert_eq!(w.inventory.get(Item::Wood), 1);
        assert!(ev.contains(&VerifierId::Achievement(Achievement::CollectWood)));
    }

    #[test]
    fn go_to_tree_fires_when_first_facing_it() {
        let mut w = blank();
        w.set_tile(Pos::new(4, 3), TileKind::Tree);
        let ev = step(&mut w, ElementaryAction::MoveRight);
        assert_eq!(w.agent_pos, Pos::new(3, 3), "trees block movement");
        assert!(ev.contains(&VerifierId::Achievement(Achievement::GoToTree)));
        let ev = step(&mut w, ElementaryAction::ChopTree);
        assert!(!ev.contains(&VerifierId::Achievement(Achievement::GoToTree)));
        assert!(ev.contains(&VerifierId::Achievement(Achievement::CollectWood)));
    }

    #[test]
    fn place_table_consumes_two_wood() {
        let mut w = blank();
        w.inventory.add(Item::Wood, 2);
        let ev = step(&mut w, ElementaryAction::PlaceTable);
        assert_eq!(w.inventory.get(Item::Wood), 0);
        assert_eq!(w.tile(Pos::new(3, 4)), Some(TileKind::Table));
        assert_eq!(w.placements, vec![Placement { kind: TileKind::Table, pos: Pos::new(3, 4) }]);
        assert!(ev.contains(&VerifierId::Achievement(Achievement::PlaceTable)));
    }

    #[test]
    fn place_table_with_one_wood_is_a_noop() {
        let mut w = blank();
        w.inventory.add(Item::Wood, 1);
        let before = w.clone();
        let ev = step(&mut w, ElementaryAction::PlaceTable);
        assert_eq!(ev, vec![VerifierId::Action(ElementaryAction::PlaceTable)]);
        assert_eq!(w.grid, before.grid);
        assert_eq!(w.inventory, before.inventory);
        assert_eq!(w.ll_step_count, before.ll_step_count + 1);
    }

    #[test]
    fn extract_stone_needs_a_pickaxe() {
        let mut w = blank();
        w.set_tile(Pos::new(3, 4), TileKind::Stone);
        let ev = step(&mut w, ElementaryAction::ExtractStone);
        assert_eq!(w.inventory.get(Item::Stone), 0);
        assert_eq!(w.tile(Pos::new(3, 4)), Some(TileKind::Stone));
        assert_eq!(ev.len(), 1);
        w.inventory.add(Item::WoodPickaxe, 1);
        let ev = step(&mut w, ElementaryAction::ExtractStone);
        assert_eq!(w.inventory.get(Item::Stone), 1);
        assert_eq!(w.tile(Pos::new(3, 4)), Some(TileKind::Path));
        assert!(ev.contains(&VerifierId::Achievement(Achievement::CollectStone)));
    }

    #[test]
    fn craft_pickaxe_at_table() {
        let mut w = blank();
        w.inventory.add(Item::Wood, 3);
        step(&mut w, ElementaryAction::PlaceTable);
        let ev = step(&mut w, ElementaryAction::CraftWoodPickaxe);
        assert_eq!(w.inventory.get(Item::WoodPickaxe), 1);
        assert_eq!(w.inventory.get(Item::Wood), 0);
        assert!(ev.contains(&VerifierId::Achievement(Achievement::MakeWoodPickaxe)));
    }

    #[test]
    fn furnace_needs_four_stones() {
        let mut w = blank();
        w.inventory.add(Item::Stone, 3);
        assert_eq!(step(&mut w, ElementaryAction::PlaceFurnace).len(), 1);
        w.inventory.add(Item::Stone, 1);
        let ev = step(&mut w, ElementaryAction::PlaceFurnace);
        assert_eq!(w.inventory.get(Item::Stone), 0);
        assert!(ev.contains(&VerifierId::Achievement(Achievement::PlaceFurnace)));
        assert!(ev.contains(&VerifierId::Achievement(Achievement::GoToFurnace)));
    }

    #[test]
    fn moving_off_the_map_only_turns() {
        let mut w = blank();
        w.agent_pos = Pos::new(0, 0);
        step(&mut w, ElementaryAction::MoveLeft);
        assert_eq!(w.agent_pos, Pos::new(0, 0));
        assert_eq!(w.agent_facing, Direction::West);
        assert_eq!(w.faced(), None);
    }
}
