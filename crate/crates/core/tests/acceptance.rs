//! Acceptance run: one pass/fail line per criterion, nonzero exit on failure.
//!
//! The learning-trend criteria train four full agents and four flat baselines
//! on the 9x9 three-goal preset. Flat runs stop one eval after the full
//! agents' median mastery step, the earliest point at which the comparison
//! is decided.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use autotelic::persist::MetricsRecord;
use common::checks::{self, Verdict};
use common::runs::{self, TrendRun};

const SEEDS: [u64; 4] = [0, 1, 2, 3];

fn report(id: u32, name: &str, v: &Verdict) {
    println!("[{}] {id:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        let (a, b) = (xs[n / 2 - 1], xs[n / 2]);
        if a == b {
            a
        } else {
            (a + b) / 2.0
        }
    }
}

fn mastery_steps(runs: &[TrendRun]) -> Vec<f64> {
    runs.iter().map(|r| r.mastery.map_or(f64::INFINITY, |s| s as f64)).collect()
}

fn fmt_mastery(runs: &[TrendRun]) -> String {
    let v: Vec<String> = runs.iter().map(|r| r.mastery.map_or("-".into(), |s| s.to_string())).collect();
    v.join("/")
}

fn trend(full: &[TrendRun], flat: &[TrendRun], flat_cap_hl: u64) -> Verdict {
    let mastered = full.iter().filter(|r| r.best_sr >= 0.8).count();
    let full_median = median(mastery_steps(full));
    let flat_steps: Vec<f64> = flat.iter().map(|r| r.mastery.map_or(f64::INFINITY, |s| s as f64)).collect();
    let flat_median = median(flat_steps);
    let best: Vec<String> = full.iter().map(|r| format!("{:.2}", r.best_sr)).collect();
    Verdict::new(
        mastered >= 3 && full_median < flat_median,
        format!(
            "SR >= 0.8 on {mastered}/4 seeds (best SR {}); HL steps to mastery full {} (median {full_median}) vs flat {} (median {flat_median}, flat runs stopped at {flat_cap_hl} HL steps)",
            best.join("/"),
            fmt_mastery(full),
            fmt_mastery(flat),
        ),
    )
}

fn compilation(full: &[TrendRun]) -> Verdict {
    let mut per_point = [Vec::new(), Vec::new(), Vec::new()];
    for run in full {
        let calls = run.skill_calls();
        if calls.len() < 3 {
            return Verdict::new(false, format!("seed {} has fewer than three eval points", run.seed));
        }
        for (k, c) in calls[calls.len() - 3..].iter().enumerate() {
            if let Some(c) = c {
                per_point[k].push(*c);
            }
        }
    }
    if per_point.iter().any(|p| p.is_empty()) {
        return Verdict::new(false, "no successful place-table trajectory at one of the last three eval points");
    }
    let means: Vec<f64> = per_point.iter().map(|p| p.iter().sum::<f64>() / p.len() as f64).collect();
    let non_increasing = means[0] >= means[1] && means[1] >= means[2];
    Verdict::new(
        non_increasing,
        format!("mean skill calls per successful trajectory over the last three evals, averaged over seeds: {:.3} -> {:.3} -> {:.3}", means[0], means[1], means[2]),
    )
}

fn budgets(runs: &[&TrendRun]) -> Verdict {
    let (mut attempts, mut skill, mut calls, mut episode) = (0, 0, 0, 0);
    for run in runs {
        for r in &run.records {
            if let MetricsRecord::Attempt { record, .. } = r {
                attempts += 1;
                skill = skill.max(record.max_skill_steps);
                calls = calls.max(record.hl_steps);
                episode = episode.max(record.episode_hl_steps);
            }
        }
    }
    Verdict::new(
        attempts > 0 && skill <= 128 && calls <= 64 && episode <= 155,
        format!("{attempts} attempts; longest skill {skill} steps (<= 128), most skills per attempt {calls} (<= 64), longest episode {episode} HL steps (<= 155)"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut verdicts = Vec::new();
    let mut record = |id: u32, name: &str, v: Verdict| {
        report(id, name, &v);
        verdicts.push(v.pass);
    };
    record(1, "difficulty table", checks::difficulty_table());
    record(2, "score formulas", checks::score_formulas());
    record(3, "verifier oracle", checks::verifier_oracle());
    record(4, "constrained decoding", checks::constrained_decoding());
    record(5, "gradient checks", checks::gradient_checks());
    record(6, "skill-space inclusion", checks::inclusion_fidelity());
    record(7, "random-agent anchor", checks::random_agent_anchor());

    let trend_start = Instant::now();
    let full: Vec<TrendRun> = SEEDS.iter().map(|&s| TrendRun::new(s, runs::train(runs::trend_config(s, false)))).collect();
    let cfg = runs::trend_config(0, true);
    let (cycle, every) = (cfg.budgets.cycle_size as u64, cfg.eval.every_cycles);
    let full_median = median(mastery_steps(&full));
    let flat: Vec<TrendRun> = SEEDS
        .iter()
        .map(|&s| {
            let mut cfg = runs::trend_config(s, true);
            if full_median.is_finite() {
                let cycles = (full_median as u64).div_ceil(cycle).div_ceil(every) * every + every;
                cfg.budgets.max_cycles = Some(cycles);
            }
            TrendRun::new(s, runs::train(cfg))
        })
        .collect();
    let flat_cap = flat.iter().map(|r| r.hl_steps).max().unwrap_or(0);
    let trend_secs = trend_start.elapsed().as_secs_f64();
    let v = trend(&full, &flat, flat_cap);
    record(8, "learning trend", Verdict::new(v.pass, format!("{}; {trend_secs:.0}s", v.detail)));
    record(9, "compilation dynamics", compilation(&full));
    let all: Vec<&TrendRun> = full.iter().chain(&flat).collect();
    record(10, "budget enforcement", budgets(&all));

    let (fresh, resumed, n) = runs::reproducibility(7);
    record(11, "reproducibility", Verdict::new(fresh && resumed, format!("{n} records; repeated run identical: {fresh}, checkpoint resume identical: {resumed}")));

    let passed = verdicts.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed in {:.0}s", verdicts.len(), start.elapsed().as_secs_f64());
    if passed == verdicts.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
