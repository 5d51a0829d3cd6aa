//! The file-based workflow: train into an output directory, resume from its
//! checkpoint, evaluate on held-out worlds, then flatten the metrics into
//! CSV tables.
//!
//! cargo run --release --example run_directory -- [out_dir]

use autotelic::cli::{self, RunArgs, Suite};
use autotelic::persist::{read_metrics, RunConfig};

fn main() -> autotelic::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("autotelic-run"), Into::into);
    let _ = std::fs::remove_dir_all(&out);
    std::fs::create_dir_all(&out)?;

    let mut cfg = RunConfig::trend();
    cfg.budgets.max_cycles = Some(2);
    cfg.eval.every_cycles = 1;
    cfg.eval.seeds = 8;
    let config = out.join("short.toml");
    std::fs::write(&config, cfg.to_toml())?;

    let args = RunArgs { config: Some(config.clone()), out: Some(out.clone()), ..Default::default() };
    let trainer = cli::train(&args)?;
    println!("trained {} cycles into {}", trainer.counters.cycles, out.display());

    // stopping limits are not part of the run identity, so a longer budget resumes
    cfg.budgets.max_cycles = Some(4);
    let longer = out.join("longer.toml");
    std::fs::write(&longer, cfg.to_toml())?;
    let checkpoint = out.join(cli::CHECKPOINT_FILE);
    let resumed = cli::train(&RunArgs { config: Some(longer), resume: Some(checkpoint.clone()), ..args })?;
    println!("resumed to {} cycles", resumed.counters.cycles);

    let report = cli::eval(&checkpoint, Suite::Canonical, &[], Some(16))?;
    for g in &report.goals {
        println!("{:<12} sr {:.2}", g.goal, g.success_rate);
    }

    let metrics = out.join(cli::METRICS_FILE);
    println!("{} metrics records", read_metrics(&metrics)?.len());
    for path in cli::export_plots(&metrics, &out.join("plots"))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
