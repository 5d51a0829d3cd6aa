use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::{Direction, Inventory, Pos, WorldState};
use super::tile::TileKind;
use crate::{Error, Result};

/// Patch densities for procedural generation. Each density is the expected
/// fraction of cells seeded with a patch of that kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorldGenConfig {
    pub water: f64,
    pub sand: f64,
    pub stone: f64,
    pub tree: f64,
    pub bush: f64,
    pub coal: f64,
    pub iron: f64,
    /// Largest patch size in cells.
    pub max_patch: usize,
    /// Rejection-sampling attempts before resources are forced next to the spawn.
    pub max_attempts: usize,
}

impl Default for WorldGenConfig {
    fn default() -> Self {
        Self { water: 0.008, sand: 0.012, stone: 0.02, tree: 0.18, bush: 0.006, coal: 0.012, iron: 0.002, max_patch: 4, max_attempts: 200 }
    }
}

pub const MIN_SIDE: usize = 7;

/// Generates a world with the default densities.
pub fn generate_world(seed: u64, side: usize) -> Result<WorldState> {
    generate_world_with(seed, side, &WorldGenConfig::default())
}

pub fn generate_world_with(seed: u64, side: usize, config: &WorldGenConfig) -> Result<WorldState> {
    if side < MIN_SIDE {
        return Err(Error::Config(format!("world side must be at least {MIN_SIDE}, got {side}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spawn = Pos::new((side / 2) as i32, (side / 2) as i32);
    let mut grid = Vec::new();
    let mut accepted = false;
    for _ in 0..config.max_attempts.max(1) {
        grid = scatter(&mut rng, side, spawn, config);
        if resources_reachable(&grid, side, spawn) {
            accepted = true;
            break;
        }
    }
    if !accepted {
        force_resources(&mut grid, side, spawn);
    }
    Ok(WorldState {
        seed,
        side,
        grid,
        agent_pos: spawn,
        agent_facing: Direction::South,
        inventory: Inventory::default(),
        placements: Vec::new(),
        ll_step_count: 0,
        hl_step_count: 0,
        episode_step_count: 0,
        rng,
    })
}

fn scatter(rng: &mut ChaCha8Rng, side: usize, spawn: Pos, cfg: &WorldGenConfig) -> Vec<TileKind> {
    let mut grid = vec![TileKind::Grass; side * side];
    let area = (side * side) as f64;
    let mean_patch = (1 + cfg.max_patch.max(1)) as f64 / 2.0;
    // later kinds overwrite earlier ones; coal and iron sit on top of stone
    let layers = [
        (TileKind::Water, cfg.water),
        (TileKind::Sand, cfg.sand),
        (TileKind::Stone, cfg.stone),
        (TileKind::Tree, cfg.tree),
        (TileKind::Bush, cfg.bush),
        (TileKind::Coal, cfg.coal),
        (TileKind::Iron, cfg.iron),
    ];
    for (kind, density) in layers {
        let expected = density * area / mean_patch;
        let mut n = expected.floor() as usize;
        if rng.gen::<f64>() < expected.fract() {
            n += 1;
        }
        for _ in 0..n {
            let size = rng.gen_range(1..=cfg.max_patch.max(1));
            let mut p = Pos::new(rng.gen_range(0..side as i32), rng.gen_range(0..side as i32));
            for _ in 0..size {
                grid[p.y as usize * side + p.x as usize] = kind;
                let dir = [Direction::North, Direction::South, Direction::West, Direction::East][rng.gen_range(0..4)];
                let q = p.step(dir);
                if q.x >= 0 && q.y >= 0 && (q.x as usize) < side && (q.y as usize) < side {
                    p = q;
                }
            }
        }
    }
    grid[spawn.y as usize * side + spawn.x as usize] = TileKind::Grass;
    grid
}

/// Cells the agent can stand on, starting from `spawn`.
pub(crate) fn reachable_cells(grid: &[TileKind], side: usize, spawn: Pos) -> Vec<bool> {
    let mut seen = vec![false; side * side];
    let mut queue = VecDeque::from([spawn]);
    seen[spawn.y as usize * side + spawn.x as usize] = true;
    while let Some(p) = queue.pop_front() {
        for dir in [Direction::North, Direction::South, Direction::West, Direction::East] {
            let q = p.step(dir);
            if q.x < 0 || q.y < 0 || q.x as usize >= side || q.y as usize >= side {
                continue;
            }
            let i = q.y as usize * side + q.x as usize;
            if !seen[i] && grid[i].is_walkable() {
                seen[i] = true;
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Every goal resource (tree, stone, coal) can be faced from a reachable cell,
/// and there is a free cell besides the spawn to build on.
fn resources_reachable(grid: &[TileKind], side: usize, spawn: Pos) -> bool {
    let reach = reachable_cells(grid, side, spawn);
    let mut found = [false; 3];
    let mut buildable = 0;
    for (i, &r) in reach.iter().enumerate() {
        if !r {
            continue;
        }
        buildable += 1;
        let p = Pos::new((i % side) as i32, (i / side) as i32);
        for dir in [Direction::North, Direction::South, Direction::West, Direction::East] {
            let q = p.step(dir);
            if q.x < 0 || q.y < 0 || q.x as usize >= side || q.y as usize >= side {
                continue;
            }
            match grid[q.y as usize * side + q.x as usize] {
                TileKind::Tree => found[0] = true,
                TileKind::Stone => found[1] = true,
                TileKind::Coal => found[2] = true,
                _ => {}
            }
        }
    }
    found.iter().all(|&f| f) && buildable >= 2
}

fn force_resources(grid: &mut [TileKind], side: usize, spawn: Pos) {
    grid.iter_mut().for_each(|t| *t = TileKind::Grass);
    let s = spawn.y as usize * side + spawn.x as usize;
    grid[s - side] = TileKind::Tree;
    grid[s - 1] = TileKind::Stone;
    grid[s + 1] = TileKind::Coal;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        assert_eq!(generate_world(0, 32).unwrap(), generate_world(0, 32).unwrap());
    }

    #[test]
    fn different_seeds_give_different_grids() {
        assert_ne!(generate_world(0, 32).unwrap().grid, generate_world(1, 32).unwrap().grid);
    }

    #[test]
    fn small_world_has_a_tree() {
        let w = generate_world(5, 7).unwrap();
        assert!(w.count(TileKind::Tree) >= 1);
    }

    #[test]
    fn rejects_tiny_side() {
        assert!(matches!(generate_world(0, 6), Err(Error::Config(_))));
    }

    #[test]
    fn resources_reachable_and_nothing_built() {
        for seed in 0..200 {
            for side in [7, 9, 16, 32] {
                let w = generate_world(seed, side).unwrap();
                assert!(resources_reachable(&w.grid, side, w.agent_pos), "seed {seed} side {side}");
                assert_eq!(w.count(TileKind::Table), 0);
                assert_eq!(w.count(TileKind::Furnace), 0);
                assert_eq!(w.count(TileKind::Plant), 0);
                assert_eq!(w.count(TileKind::PlacedStone), 0);
                w.check_invariants().unwrap();
            }
        }
    }
}
