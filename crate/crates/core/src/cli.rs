//! Command-line entry points: train, eval, generalize and export-plots.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::craftworld::difficulty_of;
use crate::evaluation::{self, EvalGoal, EvalReport, MASTERY};
use crate::orchestrator::Trainer;
use crate::persist::{checkpoint, read_metrics, JsonlWriter, MetricsRecord, RunConfig};
use crate::{Error, Result};

pub const OUT_ENV: &str = "AUTOTELIC_OUT";
pub const METRICS_FILE: &str = "metrics.jsonl";
pub const CHECKPOINT_FILE: &str = "checkpoint.bin";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Parser, Debug)]
#[command(name = "autotelic", version, about = "Hierarchical autotelic agent on a crafting gridworld")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; overrides the config and may come from AUTOTELIC_OUT.
    #[arg(long, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Checkpoint to continue from.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Accept a checkpoint whose config hash differs.
    #[arg(long)]
    pub force: bool,
    /// High level over elementary actions only, no low-level training.
    #[arg(long)]
    pub flat_baseline: bool,
    /// Desk-scale preset when no config file is given.
    #[arg(long)]
    pub desk_scale: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Canonical,
    WoodSword,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Synonym,
    Compositional,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train an agent.
    Train(RunArgs),
    /// Evaluate a checkpoint on held-out worlds.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        suite: Suite,
        /// Goal texts; defaults to the run's evaluation goals.
        #[arg(long, num_args = 1..)]
        goals: Vec<String>,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long, env = OUT_ENV)]
        out: Option<PathBuf>,
    },
    /// Run a generalization protocol on a checkpoint.
    Generalize {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, value_enum)]
        protocol: Protocol,
        /// Repetitions for the compositional protocol.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, env = OUT_ENV)]
        out: Option<PathBuf>,
    },
    /// Flatten a metrics stream into CSV tables.
    ExportPlots {
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long, env = OUT_ENV)]
        out: Option<PathBuf>,
    },
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Train(args) => train(&args).map(|_| ()),
        Command::Eval { checkpoint, suite, goals, seeds, out } => {
            let report = eval(&checkpoint, suite, &goals, seeds)?;
            emit_report(&report, out.as_deref(), "eval.json")
        }
        Command::Generalize { checkpoint, protocol, n, out } => {
            let report = generalize(&checkpoint, protocol, n)?;
            emit_report(&report, out.as_deref(), "generalize.json")
        }
        Command::ExportPlots { metrics, out } => {
            let dir = out.unwrap_or_else(|| metrics.parent().unwrap_or(Path::new(".")).join("plots"));
            export_plots(&metrics, &dir).map(|_| ())
        }
    }
}

/// Effective configuration: file or preset, then flag overrides.
pub fn resolve_config(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match (&args.config, args.desk_scale) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, true) => RunConfig::desk(),
        (None, false) => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.flat_baseline |= args.flat_baseline;
    cfg.validate()?;
    Ok(cfg)
}

/// Trains, appending metrics and writing checkpoints under the output directory.
pub fn train(args: &RunArgs) -> Result<Trainer> {
    let cfg = resolve_config(args)?;
    let mut trainer = match &args.resume {
        Some(path) => {
            let mut t = checkpoint::load(path, Some(&cfg.hash()), args.force)?;
            t.cfg.out_dir = cfg.out_dir.clone();
            t.cfg.budgets.max_env_steps = cfg.budgets.max_env_steps;
            t.cfg.budgets.max_cycles = cfg.budgets.max_cycles;
            t
        }
        None => Trainer::new(cfg)?,
    };
    let out = trainer.cfg.out_dir.clone();
    fs::create_dir_all(&out)?;
    fs::write(out.join(CONFIG_FILE), trainer.cfg.to_toml())?;
    let mut sink = JsonlWriter::append(&out.join(METRICS_FILE))?;
    let every = trainer.cfg.checkpoint_every;
    while !trainer.finished() {
        trainer.train_cycle(&mut sink)?;
        if every > 0 && trainer.counters.cycles % every == 0 {
            checkpoint::save(&trainer, &out.join(CHECKPOINT_FILE))?;
        }
    }
    checkpoint::save(&trainer, &out.join(CHECKPOINT_FILE))?;
    Ok(trainer)
}

pub fn eval(path: &Path, suite: Suite, goals: &[String], seeds: Option<usize>) -> Result<EvalReport> {
    let trainer = checkpoint::load(path, None, true)?;
    let (goals, name) = match suite {
        Suite::Canonical => {
            let texts = if goals.is_empty() { trainer.eval_goals() } else { goals.to_vec() };
            (evaluation::canonical_suite(&trainer.catalog, &trainer.vocab, &texts)?, "canonical")
        }
        Suite::WoodSword => (evaluation::wood_sword_probe(&trainer.vocab)?, "wood_sword"),
    };
    let seeds = evaluation::held_out_seeds(trainer.cfg.eval.seed_base, seeds.unwrap_or(trainer.cfg.eval.seeds));
    evaluation::evaluate(&trainer.agent(), &trainer.cfg.world, &goals, &seeds, trainer.eval_modes(), name)
}

pub fn generalize(path: &Path, protocol: Protocol, n: u32) -> Result<EvalReport> {
    let trainer = checkpoint::load(path, None, true)?;
    let texts: Vec<String> = trainer.catalog.achievements().map(|(_, g)| g.text.clone()).collect();
    let (goals, runs, name): (Vec<EvalGoal>, usize, String) = match protocol {
        Protocol::Synonym => (
            evaluation::synonym_suite(&trainer.catalog, &trainer.lexicon, &trainer.vocab, &texts)?,
            trainer.cfg.eval.synonym_runs,
            "synonym".into(),
        ),
        Protocol::Compositional => (evaluation::compositional_suite(&trainer.catalog, &trainer.vocab, n)?, trainer.cfg.eval.seeds, format!("compositional_{n}")),
    };
    let seeds = evaluation::held_out_seeds(trainer.cfg.eval.seed_base, runs);
    evaluation::evaluate(&trainer.agent(), &trainer.cfg.world, &goals, &seeds, trainer.eval_modes(), &name)
}

fn emit_report(report: &EvalReport, out: Option<&Path>, file: &str) -> Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(file), json)?;
        }
        None => println!("{json}"),
    }
    for g in &report.goals {
        eprintln!("{:<28} sr {:.3}", g.goal, g.success_rate);
    }
    eprintln!("score {:.4}", report.score);
    Ok(())
}

struct Table {
    header: &'static str,
    rows: Vec<String>,
}

impl Table {
    fn new(header: &'static str) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn write(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        writeln!(f, "{}", self.header)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Writes one CSV per figure analog; returns the written paths.
pub fn export_plots(metrics: &Path, dir: &Path) -> Result<Vec<PathBuf>> {
    let records = if metrics.exists() { read_metrics(metrics)? } else { return Err(Error::Input(format!("{} does not exist", metrics.display()))) };
    let mut success = Table::new("hl_steps,env_steps,goal,success_rate");
    let mut score = Table::new("hl_steps,env_steps,score");
    let mut calls = Table::new("hl_steps,goal,bucket,mean_calls");
    let mut inclusion = Table::new("cycle,skill,inclusion,update_count");
    let mut mastery = Table::new("goal,difficulty,hl_steps_to_mastery");
    let mut curves: BTreeMap<String, Vec<(u64, f64)>> = BTreeMap::new();
    for r in &records {
        match r {
            MetricsRecord::Eval { at, report } => {
                score.rows.push(format!("{},{},{}", at.hl_steps, at.env_steps, report.score));
                for g in &report.goals {
                    success.rows.push(format!("{},{},{},{}", at.hl_steps, at.env_steps, g.goal, g.success_rate));
                    curves.entry(g.goal.clone()).or_default().push((at.hl_steps, g.success_rate));
                    for (bucket, mean) in &g.histogram {
                        calls.rows.push(format!("{},{},{},{}", at.hl_steps, g.goal, bucket, mean));
                    }
                }
            }
            MetricsRecord::Skillspace { record, .. } => {
                let counts: BTreeMap<&str, u32> = record.update_counts.iter().map(|(s, c)| (s.as_str(), *c)).collect();
                for (skill, p) in &record.inclusion {
                    inclusion.rows.push(format!("{},{},{},{}", record.cycle, skill, p, counts.get(skill.as_str()).copied().unwrap_or(0)));
                }
            }
            _ => {}
        }
    }
    for (goal, curve) in &curves {
        let d = difficulty_of(goal).map(|d| d.to_string()).unwrap_or_default();
        let m = evaluation::steps_to_mastery(curve.iter().copied(), MASTERY).map(|s| s.to_string()).unwrap_or_default();
        mastery.rows.push(format!("{goal},{d},{m}"));
    }
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, table) in [
        ("mastery_vs_difficulty.csv", &mastery),
        ("success_rates.csv", &success),
        ("score.csv", &score),
        ("skill_calls.csv", &calls),
        ("skill_inclusion.csv", &inclusion),
    ] {
        let path = dir.join(name);
        table.write(&path)?;
        written.push(path);
    }
    Ok(written)
}
