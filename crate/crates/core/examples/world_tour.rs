//! Generates a world, walks the agent around and prints the caption and the
//! goal events of every step.
//!
//! cargo run --example world_tour -- [seed]

use autotelic::craftworld::{caption, generate_world, step, CaptionContext, ElementaryAction, VisualObs};

fn main() -> autotelic::Result<()> {
    let seed = std::env::args().nth(1).map_or(Ok(7), |s| s.parse()).expect("seed must be an integer");
    let mut world = generate_world(seed, 16)?;
    let plan = [
        ElementaryAction::MoveUp,
        ElementaryAction::MoveLeft,
        ElementaryAction::ChopTree,
        ElementaryAction::MoveDown,
        ElementaryAction::MoveRight,
        ElementaryAction::ChopTree,
        ElementaryAction::PlaceTable,
    ];
    let skills: Vec<String> = Vec::new();
    let ctx = CaptionContext { goal: "collect wood", remaining_steps: 64, steps_done: 0, skills: &skills, last_action: "none", view: 9 };
    println!("{}", caption(&world, &ctx));
    for (t, action) in plan.into_iter().enumerate() {
        let events = step(&mut world, action);
        let keys: Vec<String> = events.iter().map(|e| e.key()).collect();
        println!("step {t}: {:<16} facing {:?} -> {}", action.key(), world.faced().map(|k| k.name()), keys.join(", "));
    }
    let obs = VisualObs::from_state(&world, 9);
    println!("\nobservation: {} features, inventory {:?}", obs.flat_features().len(), world.inventory.counts());
    Ok(())
}
