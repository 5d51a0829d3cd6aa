//! Trains the 9x9 three-goal preset and prints each evaluation as it lands.
//! Pass `--flat` for the elementary-actions baseline.
//!
//! cargo run --release --example train_trend -- [--flat] [cycles]

use autotelic::orchestrator::Trainer;
use autotelic::persist::{MetricsRecord, MetricsSink, RunConfig};

/// Prints evaluation records and drops the rest.
struct EvalPrinter;

impl MetricsSink for EvalPrinter {
    fn emit(&mut self, record: MetricsRecord) -> autotelic::Result<()> {
        if let MetricsRecord::Eval { at, report } = record {
            for g in &report.goals {
                let calls = g.mean_skill_calls.map_or("-".into(), |c| format!("{c:.2}"));
                let hist: Vec<String> = g.histogram.iter().map(|(k, v)| format!("{k} {v:.2}")).collect();
                println!("cycle {:>3}  hl {:>6}  env {:>7}  {:<12} sr {:.2}  calls {calls}  [{}]", at.cycles, at.hl_steps, at.env_steps, g.goal, g.success_rate, hist.join(", "));
            }
        }
        Ok(())
    }
}

fn main() -> autotelic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut cfg = RunConfig::trend();
    cfg.flat_baseline = args.iter().any(|a| a == "--flat");
    cfg.budgets.max_cycles = Some(args.iter().find_map(|a| a.parse().ok()).unwrap_or(16));
    let mut trainer = Trainer::new(cfg)?;
    trainer.train(&mut EvalPrinter)?;
    println!("done after {} env steps", trainer.counters.env_steps);
    Ok(())
}
