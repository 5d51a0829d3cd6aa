//! Success rate of a uniform-random policy on "go to tree" within 128 steps,
//! the calibration target of the world generator.
//!
//! cargo run --release --example random_anchor -- [worlds]

use autotelic::craftworld::{generate_world, step, Achievement, ElementaryAction, VerifierId};
use autotelic::evaluation::held_out_seeds;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> autotelic::Result<()> {
    let worlds: usize = std::env::args().nth(1).map_or(Ok(400), |s| s.parse()).expect("worlds must be an integer");
    let target = VerifierId::Achievement(Achievement::GoToTree);
    let mut hits = 0;
    for seed in held_out_seeds(1 << 40, worlds) {
        let mut world = generate_world(seed, 32)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hit = (0..128).any(|_| {
            let a = ElementaryAction::ALL[rng.gen_range(0..ElementaryAction::COUNT)];
            step(&mut world, a).contains(&target)
        });
        hits += hit as usize;
    }
    println!("random policy reaches a tree on {hits}/{worlds} worlds ({:.3})", hits as f64 / worlds as f64);
    Ok(())
}
