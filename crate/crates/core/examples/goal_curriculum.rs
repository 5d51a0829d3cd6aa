//! Learning-progress curriculum: a goal whose success rate is changing gets
//! sampled over goals that are already solved or still out of reach. A
//! scripted learner masters "collect wood" first, then "place table". In the
//! first phases the estimator is itself still learning that "go to tree"
//! always succeeds, which also shows up as progress.
//!
//! cargo run --release --example goal_curriculum

use autotelic::craftworld::{generate_world, VisualObs};
use autotelic::goalspace::GoalCatalog;
use autotelic::sampler::{GoalSampler, SamplerConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> autotelic::Result<()> {
    let catalog = GoalCatalog::default().restrict(&["go to tree", "collect wood", "place table"])?;
    let [tree, wood, table] = ["go to tree", "collect wood", "place table"].map(|t| catalog.index_of(t).unwrap());
    let mut cfg = SamplerConfig { horizon: 2_000, ..Default::default() };
    cfg.estimator.lr = 3e-3;
    cfg.estimator.hidden = vec![32];
    let mut sampler = GoalSampler::new(cfg, catalog.len(), 9, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let obs: Vec<VisualObs> = (0..32).map(|s| VisualObs::from_state(&generate_world(s, 9).unwrap(), 9)).collect();

    let rate = |phase: f64, centre: f64| 1.0 / (1.0 + (-2.0 * (phase - centre)).exp());
    for phase in 0..9 {
        let (wood_rate, table_rate) = (rate(phase as f64, 2.5), rate(phase as f64, 5.5));
        for _ in 0..100 {
            let o = &obs[rng.gen_range(0..obs.len())];
            sampler.record_outcome(std::slice::from_ref(o), tree, true);
            sampler.record_outcome(std::slice::from_ref(o), wood, rng.gen_bool(wood_rate));
            sampler.record_outcome(std::slice::from_ref(o), table, rng.gen_bool(table_rate));
            sampler.update_if_due();
        }
        let mut picks = [0usize; 3];
        for _ in 0..300 {
            let d = sampler.sample_goal(&obs[0], &catalog, &mut rng)?;
            picks[[tree, wood, table].iter().position(|&g| g == d.goal).unwrap()] += 1;
        }
        let lp: Vec<f64> = [tree, wood, table].iter().map(|&g| sampler.learning_progress(&obs[0], g)).collect::<autotelic::Result<_>>()?;
        println!(
            "phase {phase}: SR wood {wood_rate:.2} table {table_rate:.2}, epsilon {:.2}, LP tree {:.3} wood {:.3} table {:.3}; picks {:?}",
            sampler.epsilon(),
            lp[0],
            lp[1],
            lp[2],
            picks
        );
    }
    Ok(())
}
