//! Held-out evaluation: success rates, score formulas, generalization suites
//! and skill-call statistics.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::craftworld::{generate_world_with, Achievement, ElementaryAction};
use crate::goalspace::{make_n_compositional, Goal, GoalCatalog, GoalKind, Lexicon, SkillVocabulary};
use crate::orchestrator::{Agent, GoalSpec, Modes};
use crate::persist::{MetricsRecord, WorldConfig};
use crate::{Error, Result};

/// Success threshold that counts a goal as mastered.
pub const MASTERY: f64 = 0.8;

/// Geometric-mean score over success rates given in percent.
pub fn crafter_score(success_rates: &[f64]) -> Result<f64> {
    if success_rates.is_empty() {
        return Err(Error::Input("crafter score needs at least one success rate".into()));
    }
    check_percentages(success_rates)?;
    let n = success_rates.len() as f64;
    Ok((success_rates.iter().map(|&s| (1.0 + s).ln()).sum::<f64>() / n).exp() - 1.0)
}

/// Crafter score where each goal contributes the mean log term of its
/// reformulations. `groups[g]` holds the percentages of goal g's reformulations.
pub fn synonym_score(groups: &[Vec<f64>]) -> Result<f64> {
    if groups.is_empty() {
        return Err(Error::Input("synonym score needs at least one goal".into()));
    }
    let mut total = 0.0;
    for g in groups {
        if g.is_empty() {
            return Err(Error::Input("empty synonym group".into()));
        }
        check_percentages(g)?;
        total += g.iter().map(|&s| (1.0 + s).ln()).sum::<f64>() / g.len() as f64;
    }
    Ok((total / groups.len() as f64).exp() - 1.0)
}

fn check_percentages(xs: &[f64]) -> Result<()> {
    match xs.iter().find(|s| !(0.0..=100.0).contains(*s)) {
        Some(s) => Err(Error::Input(format!("success rate {s} outside [0, 100]"))),
        None => Ok(()),
    }
}

/// First step whose success rate exceeds `threshold`.
pub fn steps_to_mastery(points: impl IntoIterator<Item = (u64, f64)>, threshold: f64) -> Option<u64> {
    points.into_iter().find(|&(_, sr)| sr > threshold).map(|(step, _)| step)
}

/// `(hl_steps, success rate)` of `goal` at each eval record.
pub fn eval_curve(records: &[MetricsRecord], goal: &str) -> Vec<(u64, f64)> {
    records
        .iter()
        .filter_map(|r| match r {
            MetricsRecord::Eval { at, report } => report.goal(goal).map(|g| (at.hl_steps, g.success_rate)),
            _ => None,
        })
        .collect()
}

/// Histogram bucket for one skill call: moves merge into "move", calls
/// outside `tracked` fall into "other".
pub fn bucket(skill: &str, tracked: Option<&[&str]>) -> String {
    if ElementaryAction::ALL.iter().any(|a| a.is_move() && a.text() == skill) {
        return "move".into();
    }
    match tracked {
        Some(t) if !t.contains(&skill) => "other".into(),
        _ => skill.into(),
    }
}

/// Mean calls per trajectory for each bucket.
pub fn skill_call_histogram(trajectories: &[Vec<String>], tracked: Option<&[&str]>) -> BTreeMap<String, f64> {
    let mut counts = BTreeMap::new();
    for t in trajectories {
        for s in t {
            *counts.entry(bucket(s, tracked)).or_insert(0.0) += 1.0;
        }
    }
    let n = trajectories.len() as f64;
    counts.values_mut().for_each(|c| *c /= n);
    counts
}

/// One evaluated goal text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalResult {
    pub goal: String,
    /// Canonical goal this text reformulates or repeats.
    pub canonical: String,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean skill calls over successful runs.
    pub mean_skill_calls: Option<f64>,
    pub histogram: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub suite: String,
    pub goals: Vec<GoalResult>,
    /// Geometric-mean score over the suite's goals, grouped by canonical goal
    /// for reformulation suites.
    pub score: f64,
}

impl EvalReport {
    pub fn goal(&self, text: &str) -> Option<&GoalResult> {
        self.goals.iter().find(|g| g.goal == text)
    }
}

/// A goal text with the goal that verifies it.
#[derive(Clone, Debug)]
pub struct EvalGoal {
    pub spec: GoalSpec,
    pub canonical: String,
}

/// Canonical catalog goals by text.
pub fn canonical_suite<S: AsRef<str>>(catalog: &GoalCatalog, vocab: &SkillVocabulary, texts: &[S]) -> Result<Vec<EvalGoal>> {
    texts
        .iter()
        .map(|t| {
            let i = catalog.index_of(t.as_ref()).ok_or_else(|| Error::lookup("goal", t.as_ref()))?;
            let goal = catalog.get(i);
            Ok(EvalGoal { spec: GoalSpec::from_goal(goal, vocab, Some(i))?, canonical: goal.text.clone() })
        })
        .collect()
}

/// Every lexicon reformulation of the given goals.
pub fn synonym_suite<S: AsRef<str>>(catalog: &GoalCatalog, lexicon: &Lexicon, vocab: &SkillVocabulary, texts: &[S]) -> Result<Vec<EvalGoal>> {
    let mut out = Vec::new();
    for t in texts {
        let i = catalog.index_of(t.as_ref()).ok_or_else(|| Error::lookup("goal", t.as_ref()))?;
        let goal = catalog.get(i);
        for text in lexicon.reformulate(goal) {
            out.push(EvalGoal { spec: GoalSpec::with_text(&text, goal, vocab, None)?, canonical: goal.text.clone() });
        }
    }
    Ok(out)
}

/// "n" repetitions of every repeatable achievement; "go to" goals are excluded.
pub fn compositional_suite(catalog: &GoalCatalog, vocab: &SkillVocabulary, n: u32) -> Result<Vec<EvalGoal>> {
    let mut out = Vec::new();
    for (_, goal) in catalog.achievements().filter(|(_, g)| !g.is_go_to() && g.count == 1) {
        let composed = make_n_compositional(goal, n)?;
        out.push(EvalGoal { spec: GoalSpec::from_goal(&composed, vocab, None)?, canonical: goal.text.clone() });
    }
    Ok(out)
}

/// The held-out "make wood sword" goal, which shares a prefix with "make wood pickaxe".
pub fn wood_sword_probe(vocab: &SkillVocabulary) -> Result<Vec<EvalGoal>> {
    let goal = Goal::achievement(u32::MAX, Achievement::MakeWoodSword);
    debug_assert_eq!(goal.kind, GoalKind::Achievement);
    Ok(vec![EvalGoal { spec: GoalSpec::from_goal(&goal, vocab, None)?, canonical: goal.text.clone() }])
}

/// Held-out world seeds; disjoint from training seeds, which stay below 2^32.
pub fn held_out_seeds(base: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| base + i).collect()
}

fn run_seed(world_seed: u64, goal_index: usize) -> u64 {
    world_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (goal_index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Runs one attempt per (goal, seed) on fresh worlds, in parallel.
pub fn evaluate(agent: &Agent<'_>, world: &WorldConfig, goals: &[EvalGoal], seeds: &[u64], modes: Modes, suite: &str) -> Result<EvalReport> {
    let jobs: Vec<(usize, u64)> = (0..goals.len()).flat_map(|g| seeds.iter().map(move |&s| (g, s))).collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(g, seed)| {
            let mut state = generate_world_with(seed, world.side, &world.generator)?;
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(seed, g));
            let attempt = agent.run_attempt(&mut state, goals[g].spec.clone(), modes, &mut rng)?;
            let calls: Vec<String> = attempt.skill_calls().map(|s| agent.catalog.get(s).text.clone()).collect();
            Ok((g, attempt.success, calls))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut results: Vec<GoalResult> = goals
        .iter()
        .map(|g| GoalResult {
            goal: g.spec.text.clone(),
            canonical: g.canonical.clone(),
            runs: 0,
            successes: 0,
            success_rate: 0.0,
            mean_skill_calls: None,
            histogram: BTreeMap::new(),
        })
        .collect();
    let mut successful: Vec<Vec<Vec<String>>> = vec![Vec::new(); goals.len()];
    for (g, success, calls) in outcomes {
        results[g].runs += 1;
        if success {
            results[g].successes += 1;
            successful[g].push(calls);
        }
    }
    for (r, trajs) in results.iter_mut().zip(&successful) {
        r.success_rate = r.successes as f64 / r.runs.max(1) as f64;
        if !trajs.is_empty() {
            r.mean_skill_calls = Some(trajs.iter().map(Vec::len).sum::<usize>() as f64 / trajs.len() as f64);
            r.histogram = skill_call_histogram(trajs, None);
        }
    }
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in &results {
        groups.entry(&r.canonical).or_default().push(100.0 * r.success_rate);
    }
    let groups: Vec<Vec<f64>> = groups.into_values().collect();
    let score = if groups.is_empty() { 0.0 } else { synonym_score(&groups)? };
    Ok(EvalReport { suite: suite.to_owned(), goals: results, score })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_endpoints_and_single_hundred() {
        assert_eq!(crafter_score(&[0.0; 10]).unwrap(), 0.0);
        assert!((crafter_score(&[100.0; 10]).unwrap() - 100.0).abs() < 1e-9);
        let mut v = vec![0.0; 10];
        v[3] = 100.0;
        assert!((crafter_score(&v).unwrap() - (101f64.powf(0.1) - 1.0)).abs() < 1e-12);
        assert!(crafter_score(&[101.0]).is_err());
        assert!(synonym_score(&[vec![]]).is_err());
    }

    #[test]
    fn singleton_groups_collapse_to_crafter_score() {
        let srs = [10.0, 55.0, 0.0, 100.0];
        let groups: Vec<Vec<f64>> = srs.iter().map(|&s| vec![s]).collect();
        assert!((synonym_score(&groups).unwrap() - crafter_score(&srs).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mastery_is_first_crossing() {
        assert_eq!(steps_to_mastery([(1000, 0.1), (2000, 0.9)], MASTERY), Some(2000));
        assert_eq!(steps_to_mastery([(1000, 0.8), (2000, 0.5)], MASTERY), None);
    }

    #[test]
    fn histogram_merges_moves_and_counts_per_trajectory() {
        let t = vec![vec!["go to tree".to_string(); 10]];
        assert_eq!(skill_call_histogram(&t, None)["go to tree"], 10.0);
        assert!(skill_call_histogram(&[], None).is_empty());
        let t = vec![vec!["move up".into(), "move left".into(), "chop tree".into()], vec!["place table".into()]];
        let h = skill_call_histogram(&t, Some(&["place table"]));
        assert_eq!(h["move"], 1.0);
        assert_eq!(h["other"], 0.5);
        assert_eq!(h.values().sum::<f64>() * 2.0, 4.0);
    }
}
