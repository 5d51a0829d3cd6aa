use serde::{Deserialize, Serialize};

use super::state::{Item, Pos, WorldState};
use super::tile::TileKind;

pub const DEFAULT_VIEW: usize = 9;
const OUT_OF_BOUNDS: u8 = u8::MAX;

/// Agent-centred symbolic view: tile ids, the faced cell and the inventory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VisualObs {
    pub view: u8,
    /// Row-major tile ids, `u8::MAX` outside the map.
    pub tiles: Vec<u8>,
    /// Index into `tiles` of the faced cell.
    pub facing: u8,
    pub inventory: [u8; Item::COUNT],
}

/// Inventory counts are divided by this before being fed to networks.
const INVENTORY_SCALE: f64 = 9.0;

impl VisualObs {
    pub fn from_state(state: &WorldState, view: usize) -> Self {
        assert!(view % 2 == 1, "view window must have odd side");
        let r = (view / 2) as i32;
        let mut tiles = Vec::with_capacity(view * view);
        for dy in -r..=r {
            for dx in -r..=r {
                let p = Pos::new(state.agent_pos.x + dx, state.agent_pos.y + dy);
                tiles.push(state.tile(p).map_or(OUT_OF_BOUNDS, |t| t as u8));
            }
        }
        let (fx, fy) = state.agent_facing.delta();
        let facing = ((r + fy) * view as i32 + (r + fx)) as u8;
        let mut inventory = [0u8; Item::COUNT];
        for (slot, &c) in inventory.iter_mut().zip(state.inventory.counts()) {
            *slot = c.min(u8::MAX as u32) as u8;
        }
        Self { view: view as u8, tiles, facing, inventory }
    }

    pub fn flat_dim(view: usize) -> usize {
        (TileKind::COUNT + 1) * view * view + Item::COUNT
    }

    pub fn plane_channels() -> usize {
        TileKind::COUNT + 1 + Item::COUNT
    }

    /// Flattened one-hot tiles, a faced-cell marker plane, then scaled inventory.
    pub fn flat_features(&self) -> Vec<f64> {
        let cells = self.tiles.len();
        let mut x = vec![0.0; (TileKind::COUNT + 1) * cells + Item::COUNT];
        self.write_flat(&mut x);
        x
    }

    pub fn write_flat(&self, x: &mut [f64]) {
        let cells = self.tiles.len();
        x.iter_mut().for_each(|v| *v = 0.0);
        for (i, &t) in self.tiles.iter().enumerate() {
            if t != OUT_OF_BOUNDS {
                x[i * (TileKind::COUNT + 1) + t as usize] = 1.0;
            }
        }
        x[self.facing as usize * (TileKind::COUNT + 1) + TileKind::COUNT] = 1.0;
        let base = (TileKind::COUNT + 1) * cells;
        for (k, &c) in self.inventory.iter().enumerate() {
            x[base + k] = (c as f64 / INVENTORY_SCALE).min(1.0);
        }
    }

    /// `[channel][y][x]` planes for convolutional encoders: tile one-hots, the
    /// faced-cell marker and one constant plane per inventory item.
    pub fn planes(&self) -> Vec<f64> {
        let cells = self.tiles.len();
        let mut x = vec![0.0; Self::plane_channels() * cells];
        for (i, &t) in self.tiles.iter().enumerate() {
            if t != OUT_OF_BOUNDS {
                x[t as usize * cells + i] = 1.0;
            }
        }
        x[TileKind::COUNT * cells + self.facing as usize] = 1.0;
        for (k, &c) in self.inventory.iter().enumerate() {
            let v = (c as f64 / INVENTORY_SCALE).min(1.0);
            x[(TileKind::COUNT + 1 + k) * cells..(TileKind::COUNT + 2 + k) * cells].iter_mut().for_each(|p| *p = v);
        }
        x
    }

    pub fn faced_tile(&self) -> Option<TileKind> {
        TileKind::from_index(self.tiles[self.facing as usize] as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::generate_world;

    #[test]
    fn faced_tile_matches_world() {
        for seed in 0..20 {
            let w = generate_world(seed, 16).unwrap();
            let obs = VisualObs::from_state(&w, DEFAULT_VIEW);
            assert_eq!(obs.faced_tile(), w.faced());
            let flat = obs.flat_features();
            assert_eq!(flat.len(), VisualObs::flat_dim(DEFAULT_VIEW));
            assert_eq!(obs.planes().len(), VisualObs::plane_channels() * 81);
        }
    }
}
