//! Training runs shared by the orchestrator tests and the acceptance target.

use std::path::Path;

use autotelic::evaluation::{eval_curve, steps_to_mastery, MASTERY};
use autotelic::orchestrator::Trainer;
use autotelic::persist::{checkpoint, MetricsRecord, RunConfig};

pub const TREND_GOAL: &str = "place table";

pub fn train(cfg: RunConfig) -> Vec<MetricsRecord> {
    let mut trainer = Trainer::new(cfg).unwrap();
    let mut records = Vec::new();
    trainer.train(&mut records).unwrap();
    records
}

pub struct TrendRun {
    pub seed: u64,
    pub records: Vec<MetricsRecord>,
    /// First eval HL step with SR above the mastery threshold.
    pub mastery: Option<u64>,
    pub best_sr: f64,
    pub env_steps: u64,
    pub hl_steps: u64,
}

impl TrendRun {
    pub fn new(seed: u64, records: Vec<MetricsRecord>) -> Self {
        let curve = eval_curve(&records, TREND_GOAL);
        let best_sr = curve.iter().map(|p| p.1).fold(0.0, f64::max);
        let mastery = steps_to_mastery(curve, MASTERY);
        let last = records.last().map(|r| *r.at()).unwrap_or_default();
        Self { seed, records, mastery, best_sr, env_steps: last.env_steps, hl_steps: last.hl_steps }
    }

    /// Mean skill calls per successful trajectory at each eval point.
    pub fn skill_calls(&self) -> Vec<Option<f64>> {
        self.records
            .iter()
            .filter_map(|r| match r {
                MetricsRecord::Eval { report, .. } => report.goal(TREND_GOAL).map(|g| g.mean_skill_calls),
                _ => None,
            })
            .collect()
    }
}

pub fn trend_config(seed: u64, flat: bool) -> RunConfig {
    let mut cfg = RunConfig::trend();
    cfg.seed = seed;
    cfg.flat_baseline = flat;
    cfg
}

/// Small single-environment run used for the reproducibility checks.
pub fn repro_config(seed: u64) -> RunConfig {
    let mut cfg = RunConfig::trend();
    cfg.seed = seed;
    cfg.budgets.envs = 1;
    cfg.budgets.cycle_size = 64;
    cfg.budgets.max_cycles = Some(4);
    cfg.ll.update_every = 256;
    cfg.eval.every_cycles = 2;
    cfg.eval.seeds = 4;
    cfg
}

pub fn lines(records: &[MetricsRecord]) -> Vec<String> {
    records.iter().map(|r| r.to_line()).collect()
}

/// Runs `cfg` for `split` cycles, checkpoints, reloads and finishes; returns
/// the concatenated metrics stream.
pub fn resumed_run(cfg: RunConfig, split: u64, dir: &Path) -> Vec<MetricsRecord> {
    let hash = cfg.hash();
    let mut trainer = Trainer::new(cfg).unwrap();
    let mut records = Vec::new();
    while trainer.counters.cycles < split && !trainer.finished() {
        trainer.train_cycle(&mut records).unwrap();
    }
    let path = dir.join("checkpoint.bin");
    checkpoint::save(&trainer, &path).unwrap();
    drop(trainer);
    let mut trainer = checkpoint::load(&path, Some(&hash), false).unwrap();
    trainer.train(&mut records).unwrap();
    records
}

/// Bitwise reproducibility of two fresh runs and of a checkpoint resume.
pub fn reproducibility(seed: u64) -> (bool, bool, usize) {
    let a = lines(&train(repro_config(seed)));
    let b = lines(&train(repro_config(seed)));
    let dir = tempfile::tempdir().unwrap();
    let resumed = lines(&resumed_run(repro_config(seed), 2, dir.path()));
    (a == b, a == resumed, a.len())
}
