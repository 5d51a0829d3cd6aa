use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tile::TileKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    North,
    South,
    West,
    East,
}

impl Direction {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::North => (0, -1),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
            Direction::East => (1, 0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Item {
    Sapling,
    Wood,
    Stone,
    Coal,
    WoodPickaxe,
    WoodSword,
}

impl Item {
    pub const COUNT: usize = 6;
    pub const ALL: [Item; Self::COUNT] = [Item::Sapling, Item::Wood, Item::Stone, Item::Coal, Item::WoodPickaxe, Item::WoodSword];

    pub fn name(self) -> &'static str {
        match self {
            Item::Sapling => "sapling",
            Item::Wood => "wood",
            Item::Stone => "stone",
            Item::Coal => "coal",
            Item::WoodPickaxe => "wood pickaxe",
            Item::WoodSword => "wood sword",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inventory([u32; Item::COUNT]);

impl Inventory {
    pub fn get(&self, item: Item) -> u32 {
        self.0[item as usize]
    }

    pub fn add(&mut self, item: Item, n: u32) {
        self.0[item as usize] += n;
    }

    /// Removes `n` items if available; returns whether it did.
    pub fn take(&mut self, item: Item, n: u32) -> bool {
        let slot = &mut self.0[item as usize];
        if *slot >= n {
            *slot -= n;
            true
        } else {
            false
        }
    }

    pub fn counts(&self) -> &[u32; Item::COUNT] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Non-zero entries in canonical item order.
    pub fn iter(&self) -> impl Iterator<Item = (Item, u32)> + '_ {
        Item::ALL.into_iter().map(|i| (i, self.get(i))).filter(|&(_, c)| c > 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn step(self, dir: Direction) -> Self {
        let (dx, dy) = dir.delta();
        Self { x: self.x + dx, y: self.y + dy }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub kind: TileKind,
    pub pos: Pos,
}

/// Full simulator state. Cloning it snapshots the world including its RNG.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub seed: u64,
    pub side: usize,
    pub grid: Vec<TileKind>,
    pub agent_pos: Pos,
    pub agent_facing: Direction,
    pub inventory: Inventory,
    pub placements: Vec<Placement>,
    pub ll_step_count: u64,
    pub hl_step_count: u32,
    pub episode_step_count: u64,
    pub rng: ChaCha8Rng,
}

impl WorldState {
    pub fn in_bounds(&self, p: Pos) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.side && (p.y as usize) < self.side
    }

    pub fn tile(&self, p: Pos) -> Option<TileKind> {
        self.in_bounds(p).then(|| self.grid[p.y as usize * self.side + p.x as usize])
    }

    pub(crate) fn set_tile(&mut self, p: Pos, kind: TileKind) {
        let side = self.side;
        self.grid[p.y as usize * side + p.x as usize] = kind;
    }

    pub fn facing_pos(&self) -> Pos {
        self.agent_pos.step(self.agent_facing)
    }

    /// Kind of the cell in front of the agent; `None` at the map border.
    pub fn faced(&self) -> Option<TileKind> {
        self.tile(self.facing_pos())
    }

    pub fn count(&self, kind: TileKind) -> usize {
        self.grid.iter().filter(|&&t| t == kind).count()
    }

    /// Structural invariants; used by tests and debug assertions.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.grid.len() != self.side * self.side {
            return Err("grid size mismatch".into());
        }
        if !self.in_bounds(self.agent_pos) {
            return Err(format!("agent outside grid at {:?}", self.agent_pos));
        }
        if !self.tile(self.agent_pos).unwrap().is_walkable() {
            return Err("agent stands on a non-walkable tile".into());
        }
        for p in &self.placements {
            if self.tile(p.pos) != Some(p.kind) {
                return Err(format!("placement {p:?} does not match grid"));
            }
        }
        Ok(())
    }
}
