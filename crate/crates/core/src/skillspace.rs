//! Competence-gated admissible skill sets for the high level.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::goalspace::{GoalCatalog, SkillId};

/// Per-skill low-level update counts over a sliding window of collection cycles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpdateFrequencyTracker {
    window: usize,
    n_skills: usize,
    /// Oldest cycle first; the last entry is the open cycle.
    cycles: VecDeque<Vec<u32>>,
}

impl UpdateFrequencyTracker {
    pub fn new(n_skills: usize, window: usize) -> Self {
        Self { window: window.max(1), n_skills, cycles: VecDeque::from([vec![0; n_skills]]) }
    }

    pub fn record_update(&mut self, skill: SkillId) {
        self.cycles.back_mut().unwrap()[skill] += 1;
    }

    pub fn end_cycle(&mut self) {
        self.cycles.push_back(vec![0; self.n_skills]);
        while self.cycles.len() > self.window {
            self.cycles.pop_front();
        }
    }

    pub fn count(&self, skill: SkillId) -> u32 {
        self.cycles.iter().map(|c| c[skill]).sum()
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

/// Exploration floor: the raw update count capped at 0.1, so any recent
/// update yields 0.1 and none yields 0.
pub fn exploration_epsilon(update_count: u32) -> f64 {
    (update_count as f64).min(0.1)
}

pub fn inclusion_probability(estimate: f64, epsilon: f64) -> f64 {
    estimate.max(epsilon)
}

/// One inclusion draw for a non-elementary goal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionDraw {
    pub skill: SkillId,
    pub probability: f64,
    pub included: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    /// Catalog order, elementary skills included.
    pub skills: Vec<SkillId>,
    pub draws: Vec<InclusionDraw>,
}

impl AdmissibleSet {
    pub fn contains(&self, skill: SkillId) -> bool {
        self.skills.contains(&skill)
    }

    /// Only the elementary actions; used by the flat baseline.
    pub fn elementary_only(catalog: &GoalCatalog) -> Self {
        Self { skills: catalog.elementary().map(|(i, _)| i).collect(), draws: Vec::new() }
    }
}

/// Draws the admissible set: every elementary skill, plus each other goal with
/// probability `max(estimate, epsilon)`.
pub fn build<R: Rng + ?Sized>(
    catalog: &GoalCatalog,
    mut estimate: impl FnMut(SkillId) -> f64,
    tracker: &UpdateFrequencyTracker,
    rng: &mut R,
) -> AdmissibleSet {
    let mut skills = Vec::with_capacity(catalog.len());
    let mut draws = Vec::new();
    for (i, goal) in catalog.goals().iter().enumerate() {
        if goal.is_elementary() {
            skills.push(i);
            continue;
        }
        let probability = inclusion_probability(estimate(i), exploration_epsilon(tracker.count(i)));
        let included = rng.gen::<f64>() < probability;
        if included {
            skills.push(i);
        }
        draws.push(InclusionDraw { skill: i, probability, included });
    }
    AdmissibleSet { skills, draws }
}
