#![allow(dead_code)]

pub mod checks;
pub mod oracle;
pub mod runs;

use autotelic::craftworld::{generate_world, ElementaryAction, Item, TileKind, WorldState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random world; every other one gets a random inventory and scattered tiles
/// so that crafting and placement rules fire within a short rollout.
pub fn oracle_world(seed: u64, side: usize) -> WorldState {
    let mut w = generate_world(seed, side).unwrap();
    if seed % 2 == 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for item in Item::ALL {
            w.inventory.add(item, rng.gen_range(0..5));
        }
        let agent = w.agent_pos.y as usize * side + w.agent_pos.x as usize;
        for (i, t) in w.grid.iter_mut().enumerate() {
            if i != agent && rng.gen_bool(0.3) {
                *t = TileKind::ALL[rng.gen_range(0..TileKind::COUNT)];
            }
        }
    }
    w
}

/// Uniform-random rollouts checked step by step against the oracle; returns
/// the total number of achievement events.
pub fn oracle_rollouts(n: u64, len: usize, side: usize) -> Result<usize, String> {
    let mut total = 0;
    for seed in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9));
        let actions: Vec<_> = (0..len).map(|_| ElementaryAction::ALL[rng.gen_range(0..ElementaryAction::COUNT)]).collect();
        total += oracle::compare_rollout(oracle_world(seed, side), &actions).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(total)
}
