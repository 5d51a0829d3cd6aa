//! Second implementation of the crafting rules, written against the
//! requirement list rather than the simulator code. It tracks its own copy of
//! the grid, position, facing and inventory and predicts the goal events of
//! every transition.

use std::collections::{BTreeMap, BTreeSet};

use autotelic::craftworld::{step, Direction, ElementaryAction, Item, WorldState};

pub struct Oracle {
    side: i32,
    grid: Vec<&'static str>,
    x: i32,
    y: i32,
    facing: (i32, i32),
    inv: BTreeMap<&'static str, u32>,
}

const WALKABLE: [&str; 3] = ["grass", "sand", "path"];
const GO_TO: [(&str, &str); 5] = [("tree", "go_to_tree"), ("stone", "go_to_stone"), ("coal", "go_to_coal"), ("table", "go_to_table"), ("furnace", "go_to_furnace")];

impl Oracle {
    pub fn new(w: &WorldState) -> Self {
        let facing = match w.agent_facing {
            Direction::North => (0, -1),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
            Direction::East => (1, 0),
        };
        let inv = Item::ALL.iter().map(|&i| (i.name(), w.inventory.get(i))).collect();
        Self { side: w.side as i32, grid: w.grid.iter().map(|t| t.name()).collect(), x: w.agent_pos.x, y: w.agent_pos.y, facing, inv }
    }

    fn at(&self, x: i32, y: i32) -> Option<&'static str> {
        (x >= 0 && y >= 0 && x < self.side && y < self.side).then(|| self.grid[(y * self.side + x) as usize])
    }

    fn front(&self) -> (i32, i32) {
        (self.x + self.facing.0, self.y + self.facing.1)
    }

    fn faced(&self) -> Option<&'static str> {
        let (fx, fy) = self.front();
        self.at(fx, fy)
    }

    fn set_front(&mut self, kind: &'static str) {
        let (fx, fy) = self.front();
        self.grid[(fy * self.side + fx) as usize] = kind;
    }

    fn count(&self, item: &str) -> u32 {
        self.inv[item]
    }

    fn add(&mut self, item: &'static str, n: i64) {
        let c = self.inv.get_mut(item).unwrap();
        *c = (*c as i64 + n) as u32;
    }

    /// Applies `action`; `sapling_gain` is the stochastic outcome of chopping grass.
    pub fn apply(&mut self, action: &str, sapling_gain: u32) -> BTreeSet<&'static str> {
        let before = self.faced();
        let mut events = BTreeSet::new();
        let face = self.faced();
        let buildable = face.is_some_and(|f| WALKABLE.contains(&f));
        match action {
            "move_up" | "move_down" | "move_left" | "move_right" => {
                self.facing = match action {
                    "move_up" => (0, -1),
                    "move_down" => (0, 1),
                    "move_left" => (-1, 0),
                    _ => (1, 0),
                };
                let (fx, fy) = self.front();
                if self.at(fx, fy).is_some_and(|t| WALKABLE.contains(&t)) {
                    self.x = fx;
                    self.y = fy;
                }
            }
            "chop_tree" if face == Some("tree") => {
                self.add("wood", 1);
                events.insert("collect_wood");
            }
            "chop_bush" if face == Some("bush") => {
                self.add("sapling", 1);
                self.set_front("grass");
            }
            "chop_grass" if face == Some("grass") => self.add("sapling", sapling_gain as i64),
            "extract_stone" if face == Some("stone") && self.count("wood pickaxe") >= 1 => {
                self.add("stone", 1);
                self.set_front("path");
                events.insert("collect_stone");
            }
            "extract_coal" if face == Some("coal") && self.count("wood pickaxe") >= 1 => {
                self.add("coal", 1);
                self.set_front("path");
                events.insert("collect_coal");
            }
            "place_table" if buildable && self.count("wood") >= 2 => {
                self.add("wood", -2);
                self.set_front("table");
                events.insert("place_table");
            }
            "place_furnace" if buildable && self.count("stone") >= 4 => {
                self.add("stone", -4);
                self.set_front("furnace");
                events.insert("place_furnace");
            }
            "place_stone" if (buildable || face == Some("water")) && self.count("stone") >= 1 => {
                self.add("stone", -1);
                self.set_front("placed stone");
            }
            "place_plant" if face == Some("grass") && self.count("sapling") >= 1 => {
                self.add("sapling", -1);
                self.set_front("plant");
            }
            "craft_wood_pickaxe" if face == Some("table") && self.count("wood") >= 1 => {
                self.add("wood", -1);
                self.add("wood pickaxe", 1);
                events.insert("make_wood_pickaxe");
            }
            "craft_wood_sword" if face == Some("table") && self.count("wood") >= 1 => {
                self.add("wood", -1);
                self.add("wood sword", 1);
                events.insert("make_wood_sword");
            }
            _ => {}
        }
        let after = self.faced();
        for (kind, event) in GO_TO {
            if after == Some(kind) && before != Some(kind) {
                events.insert(event);
            }
        }
        events
    }

    /// Mismatch between the oracle's state and the simulator's, if any.
    pub fn diff(&self, w: &WorldState) -> Option<String> {
        let grid: Vec<&str> = w.grid.iter().map(|t| t.name()).collect();
        if grid != self.grid {
            return Some("grid differs".into());
        }
        if (w.agent_pos.x, w.agent_pos.y) != (self.x, self.y) {
            return Some(format!("position {:?} vs ({}, {})", w.agent_pos, self.x, self.y));
        }
        for item in Item::ALL {
            if w.inventory.get(item) != self.inv[item.name()] {
                return Some(format!("inventory {} differs", item.name()));
            }
        }
        None
    }
}

/// Runs one rollout through both implementations; returns the number of
/// achievement events seen, or a description of the first disagreement.
pub fn compare_rollout(mut w: WorldState, actions: &[ElementaryAction]) -> Result<usize, String> {
    let mut oracle = Oracle::new(&w);
    let mut seen = 0;
    for (t, &a) in actions.iter().enumerate() {
        let saplings = w.inventory.get(Item::Sapling);
        let events = step(&mut w, a);
        let gain = w.inventory.get(Item::Sapling).saturating_sub(saplings);
        let gain = if a == ElementaryAction::ChopGrass { gain } else { 0 };
        let expected = oracle.apply(a.key(), gain);
        let action_key = format!("action.{}", a.key());
        let keys: Vec<String> = events.iter().map(|e| e.key()).collect();
        if !keys.contains(&action_key) {
            return Err(format!("step {t}: missing action event {action_key}"));
        }
        let got: BTreeSet<String> = keys.into_iter().filter(|k| !k.starts_with("action.")).collect();
        let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        if got != want {
            return Err(format!("step {t} action {}: simulator {got:?} oracle {want:?}", a.key()));
        }
        if let Some(d) = oracle.diff(&w) {
            return Err(format!("step {t} action {}: {d}", a.key()));
        }
        seen += got.len();
    }
    Ok(seen)
}
