//! Draws admissible skill sets from competence estimates and recent update
//! counts, and compares inclusion frequencies with their probabilities.
//!
//! cargo run --example skill_space

use autotelic::goalspace::GoalCatalog;
use autotelic::skillspace::{build, exploration_epsilon, inclusion_probability, UpdateFrequencyTracker};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let catalog = GoalCatalog::default();
    let mut tracker = UpdateFrequencyTracker::new(catalog.len(), 5);
    // pretend the low level just trained "collect wood"
    let wood = catalog.index_of("collect wood").unwrap();
    tracker.record_update(wood);
    let estimate = |s: usize| match catalog.get(s).text.as_str() {
        "go to tree" => 0.9,
        "place table" => 0.3,
        _ => 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let draws = 5000;
    let mut counts = vec![0usize; catalog.len()];
    let mut size = 0;
    for _ in 0..draws {
        let set = build(&catalog, estimate, &tracker, &mut rng);
        size += set.skills.len();
        for s in set.skills {
            counts[s] += 1;
        }
    }
    println!("mean admissible set size {:.2}", size as f64 / draws as f64);
    println!("{:<20} {:>8} {:>8}", "skill", "p", "freq");
    for (i, goal) in catalog.achievements() {
        let p = inclusion_probability(estimate(i), exploration_epsilon(tracker.count(i)));
        println!("{:<20} {:>8.3} {:>8.3}", goal.text, p, counts[i] as f64 / draws as f64);
    }
}
