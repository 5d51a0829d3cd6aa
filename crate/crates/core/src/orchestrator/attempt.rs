use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::competence::CompetenceEstimator;
use crate::craftworld::{step, VisualObs, WorldState};
use crate::goalspace::{CountingVerifier, Goal, GoalCatalog, SkillId, SkillVocabulary, Token, EOS};
use crate::highlevel::{context_features, HighLevelPolicy, HlTransition, SkillTrie};
use crate::lowlevel::{ActMode, LowLevelBank, Segment};
use crate::persist::Budgets;
use crate::skillspace::{self, AdmissibleSet, UpdateFrequencyTracker};
use crate::Result;

/// What the high level pursues: the conditioning text and the verifier that
/// decides success. Synonyms share the verifier of their canonical goal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalSpec {
    pub text: String,
    pub tokens: Vec<Token>,
    pub verifier: CountingVerifier,
    /// Catalog index when the goal is a trainable catalog goal.
    pub skill: Option<SkillId>,
}

impl GoalSpec {
    pub fn from_goal(goal: &Goal, vocab: &SkillVocabulary, skill: Option<SkillId>) -> Result<Self> {
        Self::with_text(&goal.text, goal, vocab, skill)
    }

    /// Conditions on `text` while checking success with `goal`'s verifier.
    pub fn with_text(text: &str, goal: &Goal, vocab: &SkillVocabulary, skill: Option<SkillId>) -> Result<Self> {
        let mut tokens = vocab.tokenize(text)?;
        tokens.retain(|&t| t != EOS);
        Ok(Self { text: text.to_owned(), tokens, verifier: CountingVerifier::new(goal), skill })
    }
}

/// Read-only view of everything needed to act.
#[derive(Clone, Copy)]
pub struct Agent<'a> {
    pub catalog: &'a GoalCatalog,
    pub vocab: &'a SkillVocabulary,
    pub hl: &'a HighLevelPolicy,
    pub ll: &'a LowLevelBank,
    pub competence: &'a CompetenceEstimator,
    pub tracker: &'a UpdateFrequencyTracker,
    pub budgets: &'a Budgets,
    pub view: usize,
    pub flat: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modes {
    pub hl: ActMode,
    pub ll: ActMode,
    /// Keep reference-policy log-probabilities for the KL term.
    pub with_reference: bool,
}

impl Modes {
    pub const TRAIN: Self = Self { hl: ActMode::Sample, ll: ActMode::Sample, with_reference: true };
}

/// One goal attempt in progress: up to `n_hl` skill calls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub goal: GoalSpec,
    pub hl_steps: u32,
    pub segments: Vec<Segment>,
    /// One reward per environment transition, aligned with the concatenated segments.
    pub goal_rewards: Vec<f64>,
    /// Observation at each high-level decision.
    pub hl_obs: Vec<VisualObs>,
    pub success: bool,
    pub done: bool,
}

impl Attempt {
    pub fn new(goal: GoalSpec) -> Self {
        Self { goal, hl_steps: 0, segments: Vec::new(), goal_rewards: Vec::new(), hl_obs: Vec::new(), success: false, done: false }
    }

    pub fn skill_calls(&self) -> impl Iterator<Item = SkillId> + '_ {
        self.segments.iter().map(|s| s.skill)
    }

    pub fn env_steps(&self) -> usize {
        self.goal_rewards.len()
    }

    pub fn max_segment_len(&self) -> usize {
        self.segments.iter().map(Segment::len).max().unwrap_or(0)
    }
}

/// Result of one high-level step.
#[derive(Clone, Debug)]
pub struct HlStep {
    pub transition: HlTransition,
    pub admissible: AdmissibleSet,
    pub env_steps: usize,
}

impl Agent<'_> {
    /// Skill set for this decision: elementary actions only in flat mode,
    /// otherwise the competence-gated draw.
    pub fn admissible<R: Rng + ?Sized>(&self, obs: &VisualObs, rng: &mut R) -> AdmissibleSet {
        if self.flat {
            AdmissibleSet::elementary_only(self.catalog)
        } else {
            skillspace::build(self.catalog, |s| self.competence.estimate(obs, s), self.tracker, rng)
        }
    }

    /// High-level steps left in the attempt, bounded by the episode cap.
    pub fn remaining(&self, world: &WorldState, attempt: &Attempt) -> u32 {
        let b = self.budgets;
        b.n_hl.saturating_sub(attempt.hl_steps).min(b.episode_cap.saturating_sub(world.hl_step_count))
    }

    pub fn features(&self, world: &WorldState, attempt: &Attempt) -> Vec<f64> {
        context_features(world, self.view, &attempt.goal.tokens, self.vocab.len(), self.remaining(world, attempt), self.budgets.n_hl)
    }

    pub fn value(&self, world: &WorldState, attempt: &Attempt) -> f64 {
        self.hl.net.value(&self.hl.params, &self.features(world, attempt))
    }

    /// Chooses a skill and runs it: one environment step for an elementary
    /// skill, otherwise the skill policy until its verifier or the goal's
    /// verifier fires or `n_ll` steps pass.
    pub fn hl_step<R: Rng + ?Sized>(&self, world: &mut WorldState, attempt: &mut Attempt, modes: Modes, rng: &mut R) -> Result<HlStep> {
        debug_assert!(!attempt.done && world.hl_step_count < self.budgets.episode_cap);
        let obs = VisualObs::from_state(world, self.view);
        let features = self.features(world, attempt);
        let admissible = self.admissible(&obs, rng);
        let trie = SkillTrie::new(self.vocab, admissible.skills.iter().map(|&s| (s, self.catalog.get(s).text.as_str())))?;
        let reference = modes.with_reference.then_some(self.hl.reference.as_slice());
        let decoded = self.hl.net.decode(&self.hl.params, reference, &features, &trie, modes.hl, rng);
        let value = self.hl.net.value(&self.hl.params, &features);
        let skill = decoded.skill;
        let goal = self.catalog.get(skill);
        let skill_verifier = goal.verifier;
        let mut seg = Segment { skill, elementary: goal.is_elementary(), obs: Vec::new(), actions: Vec::new(), final_obs: obs.clone(), success: false, };
        let mut current = obs.clone();
        let limit = if seg.elementary { 1 } else { self.budgets.n_ll as usize };
        let mut goal_fired = false;
        while seg.actions.len() < limit {
            let action = self.ll.act(goal, skill, &current, modes.ll, rng)?;
            let events = step(world, action);
            seg.obs.push(current);
            seg.actions.push(action);
            goal_fired = attempt.goal.verifier.observe(&events);
            attempt.goal_rewards.push(if goal_fired { 1.0 } else { 0.0 });
            current = VisualObs::from_state(world, self.view);
            if events.contains(&skill_verifier) {
                seg.success = true;
            }
            if seg.success || goal_fired {
                break;
            }
        }
        seg.final_obs = current;
        let env_steps = seg.actions.len();
        world.hl_step_count += 1;
        attempt.hl_steps += 1;
        attempt.hl_obs.push(obs);
        attempt.segments.push(seg);
        attempt.success = goal_fired;
        attempt.done = goal_fired || attempt.hl_steps >= self.budgets.n_hl || world.hl_step_count >= self.budgets.episode_cap;
        let transition = HlTransition { features, decoded, reward: if goal_fired { 1.0 } else { 0.0 }, done: attempt.done, value };
        Ok(HlStep { transition, admissible, env_steps })
    }

    /// Runs a whole attempt from `world`, as done in evaluation.
    pub fn run_attempt<R: Rng + ?Sized>(&self, world: &mut WorldState, goal: GoalSpec, modes: Modes, rng: &mut R) -> Result<Attempt> {
        let mut attempt = Attempt::new(goal);
        while !attempt.done {
            self.hl_step(world, &mut attempt, modes, rng)?;
        }
        Ok(attempt)
    }
}
