//! Learning-progress goal curriculum: a goal-level success estimator whose
//! recent snapshots are compared to find goals where competence is moving.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::competence::{CompetenceConfig, CompetenceEstimator, EstimatorSample, EstimatorSnapshot, EstimatorStats};
use crate::craftworld::VisualObs;
use crate::goalspace::{GoalCatalog, SkillId};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerConfig {
    pub epsilon0: f64,
    pub decay_rate: f64,
    /// Entries over which epsilon decays by `exp(-decay_rate)`.
    pub horizon: u64,
    /// New entries that trigger an estimator refresh.
    pub update_every: usize,
    pub ring: usize,
    /// Entries kept from the start of each goal attempt.
    pub entries_per_attempt: usize,
    pub estimator: CompetenceConfig,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            epsilon0: 1.0,
            decay_rate: 3.34,
            horizon: 100_000,
            update_every: 128,
            ring: 3,
            entries_per_attempt: 6,
            estimator: CompetenceConfig { train_every: 128, samples_per_execution: 6, ..CompetenceConfig::default() },
        }
    }
}

/// `epsilon0 * exp(-rate * used / horizon)`.
pub fn epsilon_schedule(epsilon0: f64, rate: f64, used: u64, horizon: u64) -> f64 {
    epsilon0 * (-rate * used as f64 / horizon.max(1) as f64).exp()
}

/// The last few published estimator snapshots, oldest first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRing {
    cap: usize,
    snaps: VecDeque<EstimatorSnapshot>,
}

impl SnapshotRing {
    pub fn new(cap: usize) -> Self {
        Self { cap: cap.max(1), snaps: VecDeque::new() }
    }

    pub fn push(&mut self, snap: EstimatorSnapshot) {
        debug_assert!(self.snaps.back().is_none_or(|s| s.version < snap.version));
        if self.snaps.len() == self.cap {
            self.snaps.pop_front();
        }
        self.snaps.push_back(snap);
    }

    pub fn len(&self) -> usize {
        self.snaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snaps.is_empty()
    }

    pub fn oldest(&self) -> Option<&EstimatorSnapshot> {
        self.snaps.front()
    }

    pub fn newest(&self) -> Option<&EstimatorSnapshot> {
        self.snaps.back()
    }

    pub fn versions(&self) -> Vec<u64> {
        self.snaps.iter().map(|s| s.version).collect()
    }
}

/// Record of one goal draw, for the metrics stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalDraw {
    pub goal: SkillId,
    pub epsilon: f64,
    pub explored: bool,
    /// Learning progress per achievement goal, in catalog order.
    pub lp: Vec<(SkillId, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalSampler {
    pub cfg: SamplerConfig,
    estimator: CompetenceEstimator,
    ring: SnapshotRing,
    entries: u64,
}

impl GoalSampler {
    pub fn new(cfg: SamplerConfig, n_goals: usize, view: usize, seed: u64) -> Self {
        let estimator = CompetenceEstimator::new(cfg.estimator.clone(), vec![false; n_goals], view, seed);
        let mut ring = SnapshotRing::new(cfg.ring);
        ring.push(estimator.snapshot());
        Self { cfg, estimator, ring, entries: 0 }
    }

    pub fn ring(&self) -> &SnapshotRing {
        &self.ring
    }

    pub fn estimator(&self) -> &CompetenceEstimator {
        &self.estimator
    }

    pub fn entries(&self) -> u64 {
        self.entries
    }

    pub fn epsilon(&self) -> f64 {
        epsilon_schedule(self.cfg.epsilon0, self.cfg.decay_rate, self.entries, self.cfg.horizon)
    }

    /// `|C_newest - C_oldest|` at `(obs, goal)`.
    pub fn learning_progress(&self, obs: &VisualObs, goal: SkillId) -> Result<f64> {
        let (old, new) = match (self.ring.oldest(), self.ring.newest()) {
            (Some(o), Some(n)) => (o, n),
            _ => return Err(Error::Schedule("snapshot ring is empty".into())),
        };
        if old.version == new.version {
            return Ok(0.0);
        }
        Ok((self.estimator.estimate_with(&new.params, obs, goal) - self.estimator.estimate_with(&old.params, obs, goal)).abs())
    }

    /// Epsilon-greedy over achievement goals: uniform with probability
    /// epsilon, otherwise the highest learning progress with random tie-breaks.
    pub fn sample_goal<R: Rng + ?Sized>(&self, obs: &VisualObs, catalog: &GoalCatalog, rng: &mut R) -> Result<GoalDraw> {
        let goals: Vec<SkillId> = catalog.achievements().map(|(i, _)| i).collect();
        if goals.is_empty() {
            return Err(Error::Config("no achievement goals to sample".into()));
        }
        let lp = goals.iter().map(|&g| Ok((g, self.learning_progress(obs, g)?))).collect::<Result<Vec<_>>>()?;
        let epsilon = self.epsilon();
        let explored = rng.gen::<f64>() < epsilon;
        let goal = if explored {
            goals[rng.gen_range(0..goals.len())]
        } else {
            let best = lp.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
            let ties: Vec<SkillId> = lp.iter().filter(|&&(_, v)| v == best).map(|&(g, _)| g).collect();
            ties[rng.gen_range(0..ties.len())]
        };
        Ok(GoalDraw { goal, epsilon, explored, lp })
    }

    /// Stores the first `entries_per_attempt` high-level states of an attempt.
    pub fn record_outcome(&mut self, states: &[VisualObs], goal: SkillId, outcome: bool) -> usize {
        let n = states.len().min(self.cfg.entries_per_attempt);
        for obs in &states[..n] {
            self.estimator.record(EstimatorSample { obs: obs.clone(), skill: goal, outcome });
        }
        self.entries += n as u64;
        n
    }

    /// Refreshes the estimator every `update_every` entries and publishes a snapshot.
    pub fn update_if_due(&mut self) -> Option<EstimatorStats> {
        if self.estimator.buffer().new_since_update() < self.cfg.update_every {
            return None;
        }
        let stats = self.estimator.train();
        self.ring.push(self.estimator.snapshot());
        Some(stats)
    }

    pub fn end_cycle(&mut self) {
        self.estimator.end_cycle();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{generate_world, DEFAULT_VIEW};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn obs() -> VisualObs {
        VisualObs::from_state(&generate_world(0, 9).unwrap(), DEFAULT_VIEW)
    }

    #[test]
    fn epsilon_decays_from_epsilon0() {
        assert_eq!(epsilon_schedule(1.0, 3.34, 0, 100), 1.0);
        let mut prev = 1.0;
        for u in 1..200 {
            let e = epsilon_schedule(1.0, 3.34, u, 100);
            assert!(e > 0.0 && e <= prev);
            prev = e;
        }
        assert!((epsilon_schedule(1.0, 3.34, 100, 100) - (-3.34f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_snapshot_has_no_progress() {
        let s = GoalSampler::new(SamplerConfig::default(), 27, DEFAULT_VIEW, 0);
        assert_eq!(s.learning_progress(&obs(), 0).unwrap(), 0.0);
    }

    #[test]
    fn records_at_most_six_entries() {
        let mut s = GoalSampler::new(SamplerConfig::default(), 27, DEFAULT_VIEW, 0);
        let states = vec![obs(); 64];
        assert_eq!(s.record_outcome(&states, 0, true), 6);
        assert_eq!(s.record_outcome(&states[..3], 1, false), 3);
        assert_eq!(s.entries(), 9);
    }

    #[test]
    fn refresh_publishes_increasing_versions() {
        let cfg = SamplerConfig { update_every: 12, ..Default::default() };
        let mut s = GoalSampler::new(cfg, 27, DEFAULT_VIEW, 0);
        let states = vec![obs(); 6];
        for _ in 0..5 {
            s.record_outcome(&states, 0, true);
            s.record_outcome(&states, 1, false);
            s.update_if_due();
        }
        assert_eq!(s.ring().versions(), vec![3, 4, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let draw = s.sample_goal(&obs(), &GoalCatalog::default(), &mut rng).unwrap();
        assert!(draw.lp.iter().all(|&(_, v)| v >= 0.0));
        assert_eq!(draw.lp.len(), 11);
    }
}
