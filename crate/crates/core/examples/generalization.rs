//! Probes a briefly trained agent with reformulated goals: synonym
//! rewordings of every achievement and repeated compositional goals.
//!
//! cargo run --release --example generalization -- [cycles]

use autotelic::cli::{self, Protocol, RunArgs};
use autotelic::persist::RunConfig;

fn main() -> autotelic::Result<()> {
    let cycles = std::env::args().nth(1).map_or(Ok(4), |s| s.parse()).expect("cycles must be an integer");
    let out = std::env::temp_dir().join("autotelic-generalization");
    std::fs::create_dir_all(&out)?;
    let mut cfg = RunConfig::trend();
    cfg.budgets.max_cycles = Some(cycles);
    cfg.eval.seeds = 8;
    cfg.eval.synonym_runs = 8;
    let config = out.join("config.toml");
    std::fs::write(&config, cfg.to_toml())?;
    cli::train(&RunArgs { config: Some(config), out: Some(out.clone()), ..Default::default() })?;

    let checkpoint = out.join(cli::CHECKPOINT_FILE);
    let synonym = cli::generalize(&checkpoint, Protocol::Synonym, 0)?;
    println!("synonym score {:.3}", synonym.score);
    for g in &synonym.goals {
        println!("  {:<32} ({}) sr {:.2}", g.goal, g.canonical, g.success_rate);
    }
    let compositional = cli::generalize(&checkpoint, Protocol::Compositional, 2)?;
    println!("compositional score {:.3}", compositional.score);
    for g in &compositional.goals {
        println!("  {:<32} sr {:.2}", g.goal, g.success_rate);
    }
    Ok(())
}
