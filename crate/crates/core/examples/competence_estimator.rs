//! Trains the skill competence estimator on executions of a scripted
//! "go to tree" skill that only succeeds when a tree is in view.
//!
//! cargo run --release --example competence_estimator

use autotelic::competence::{CompetenceConfig, CompetenceEstimator};
use autotelic::craftworld::{generate_world, TileKind, VisualObs};
use autotelic::goalspace::GoalCatalog;

fn main() -> autotelic::Result<()> {
    let catalog = GoalCatalog::default();
    let skill = catalog.index_of("go to tree").unwrap();
    let elementary = catalog.goals().iter().map(|g| g.is_elementary()).collect();
    let cfg = CompetenceConfig { hidden: vec![64], lr: 3e-3, epochs: 20, samples_per_execution: 1, ..Default::default() };
    let mut estimator = CompetenceEstimator::new(cfg, elementary, 5, 0);

    let sample = |seed: u64| {
        let world = generate_world(seed, 12).unwrap();
        let obs = VisualObs::from_state(&world, 5);
        let tree_in_view = obs.tiles.contains(&(TileKind::Tree as u8));
        (obs, tree_in_view)
    };
    for seed in 0..600 {
        let (obs, success) = sample(seed);
        estimator.record_execution(&[obs], skill, success);
    }
    let stats = estimator.train();
    println!("trained on {} samples, loss {:.3}", stats.samples, stats.loss);

    let (mut right, n) = (0, 200);
    for seed in 10_000..10_000 + n {
        let (obs, success) = sample(seed);
        right += ((estimator.estimate(&obs, skill) > 0.5) == success) as usize;
    }
    println!("held-out accuracy {:.3}", right as f64 / n as f64);
    let noop = catalog.index_of("noop").unwrap();
    println!("elementary skills bypass the network: estimate(noop) = {}", estimator.estimate(&sample(0).0, noop));
    Ok(())
}
