mod common;

use std::time::Instant;

use autotelic::craftworld::{generate_world, ElementaryAction, Item, TileKind};
use common::oracle::compare_rollout;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn simulator_matches_independent_interpreter() {
    let start = Instant::now();
    let events = common::oracle_rollouts(1000, 200, 7).unwrap();
    assert!(events > 1000, "rollouts exercised too few achievements: {events}");
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn stocked_world_reaches_every_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut w = generate_world(11, 7).unwrap();
    for item in Item::ALL {
        w.inventory.add(item, 6);
    }
    for (i, t) in w.grid.iter_mut().enumerate() {
        if i as i32 != w.agent_pos.y * 7 + w.agent_pos.x && rng.gen_bool(0.5) {
            *t = TileKind::ALL[rng.gen_range(0..TileKind::COUNT)];
        }
    }
    let actions: Vec<_> = (0..2000).map(|_| ElementaryAction::ALL[rng.gen_range(0..16)]).collect();
    compare_rollout(w, &actions).unwrap();
}
