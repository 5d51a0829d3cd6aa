//! Trains one low-level skill ("go to tree") with advantage-weighted
//! regression on its own rollouts, alternating collection and updates.
//!
//! cargo run --release --example low_level_skill -- [rounds]

use autotelic::craftworld::{generate_world, step, VisualObs};
use autotelic::goalspace::GoalCatalog;
use autotelic::lowlevel::{ActMode, LowLevelBank, Segment};
use autotelic::persist::RunConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIDE: usize = 9;
const STEPS: usize = 128;

fn rollout(bank: &LowLevelBank, skill: usize, seed: u64, mode: ActMode, rng: &mut ChaCha8Rng) -> autotelic::Result<Segment> {
    let catalog = GoalCatalog::default();
    let goal = catalog.get(skill).clone();
    let mut world = generate_world(seed, SIDE)?;
    let mut seg = Segment { skill, elementary: false, obs: Vec::new(), actions: Vec::new(), final_obs: VisualObs::from_state(&world, 9), success: false };
    for _ in 0..STEPS {
        let obs = VisualObs::from_state(&world, 9);
        let action = bank.act(&goal, skill, &obs, mode, rng)?;
        let events = step(&mut world, action);
        seg.obs.push(obs);
        seg.actions.push(action);
        if events.contains(&goal.verifier) {
            seg.success = true;
            break;
        }
    }
    seg.final_obs = VisualObs::from_state(&world, 9);
    Ok(seg)
}

fn main() -> autotelic::Result<()> {
    let rounds: usize = std::env::args().nth(1).map_or(Ok(5), |s| s.parse()).expect("rounds must be an integer");
    let skill = GoalCatalog::default().index_of("go to tree").unwrap();
    let mut cfg = RunConfig::trend().ll;
    cfg.relabel_failures = false;
    let mut bank = LowLevelBank::new(cfg, 9, [skill], 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for round in 0..rounds {
        let mut successes = 0;
        for _ in 0..200 {
            let seg = rollout(&bank, skill, rng.gen::<u32>() as u64, ActMode::Sample, &mut rng)?;
            successes += seg.success as usize;
            // no outer goal here, so only the per-skill store is filled
            bank.relabel_and_store(std::slice::from_ref(&seg), skill, &vec![0.0; seg.len()]);
        }
        let stats = bank.awr_update(skill).expect("buffer holds data");
        let held_out = (0..100).filter(|&s| rollout(&bank, skill, (1 << 40) + s, ActMode::Sample, &mut rng).is_ok_and(|seg| seg.success)).count();
        println!(
            "round {round}: train SR {:.2}, held-out SR {:.2}, actor loss {:.3}, mean weight {:.2}",
            successes as f64 / 200.0,
            held_out as f64 / 100.0,
            stats.actor_loss,
            stats.mean_weight
        );
    }
    Ok(())
}
