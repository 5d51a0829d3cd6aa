use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::awr::{awr_loss_and_grad, AwrSample};
use super::buffer::{discounted_returns, LlRecord, ReplayBuffer, TrajEnd};
use super::policy::{ActMode, LlNet, LlPolicy};
use super::LowLevelConfig;
use crate::craftworld::{ElementaryAction, VisualObs};
use crate::goalspace::{Goal, SkillId};
use crate::nn::clip_grad_norm;
use crate::{Error, Result};

/// The transitions of one skill execution, in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub skill: SkillId,
    pub elementary: bool,
    /// Observation before each action.
    pub obs: Vec<VisualObs>,
    pub actions: Vec<ElementaryAction>,
    /// Observation after the last action.
    pub final_obs: VisualObs,
    /// Whether the skill's own verifier fired on the last transition.
    pub success: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlTrainStats {
    pub skill: SkillId,
    pub update: u64,
    pub buffer_len: usize,
    pub new_transitions: usize,
    pub steps: usize,
    pub actor_loss: f64,
    pub critic_loss: f64,
    pub mean_weight: f64,
    pub mean_return: f64,
}

/// All low-level skill policies and their replay buffers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowLevelBank {
    pub cfg: LowLevelConfig,
    pub net: LlNet,
    policies: BTreeMap<SkillId, LlPolicy>,
    buffers: BTreeMap<SkillId, ReplayBuffer>,
    rng: ChaCha8Rng,
}

fn skill_seed(seed: u64, skill: SkillId) -> u64 {
    seed ^ (skill as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl LowLevelBank {
    /// One policy per skill, each initialised from its own seed so the result
    /// does not depend on creation order.
    pub fn new(cfg: LowLevelConfig, view: usize, skills: impl IntoIterator<Item = SkillId>, seed: u64) -> Self {
        let net = LlNet::new(&cfg.encoder, view);
        let policies = skills
            .into_iter()
            .map(|s| (s, LlPolicy::new(&net, cfg.lr, &mut ChaCha8Rng::seed_from_u64(skill_seed(seed, s)))))
            .collect();
        Self { cfg, net, policies, buffers: BTreeMap::new(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn policy(&self, skill: SkillId) -> Option<&LlPolicy> {
        self.policies.get(&skill)
    }

    pub fn policy_mut(&mut self, skill: SkillId) -> Option<&mut LlPolicy> {
        self.policies.get_mut(&skill)
    }

    pub fn skills(&self) -> impl Iterator<Item = SkillId> + '_ {
        self.policies.keys().copied()
    }

    pub fn buffer(&self, skill: SkillId) -> Option<&ReplayBuffer> {
        self.buffers.get(&skill)
    }

    /// Elementary skills pass their action through; other skills query their policy.
    pub fn act<R: Rng + ?Sized>(&self, goal: &Goal, skill: SkillId, obs: &VisualObs, mode: ActMode, rng: &mut R) -> Result<ElementaryAction> {
        if let Some(a) = goal.action() {
            return Ok(a);
        }
        let policy = self.policies.get(&skill).ok_or_else(|| Error::lookup("skill policy", &goal.text))?;
        Ok(policy.act(&self.net, obs, mode, rng))
    }

    fn push(&mut self, skill: SkillId, traj: Vec<LlRecord>) {
        if traj.is_empty() {
            return;
        }
        let cap = self.cfg.buffer_capacity;
        self.buffers.entry(skill).or_insert_with(|| ReplayBuffer::new(cap)).push_trajectory(traj);
    }

    /// Stores each non-elementary segment under its skill, and the concatenation
    /// of all segments under `goal` with `goal_rewards` (one per transition).
    pub fn relabel_and_store(&mut self, segments: &[Segment], goal: SkillId, goal_rewards: &[f64]) {
        for seg in segments.iter().filter(|s| !s.elementary && !s.is_empty()) {
            let n = seg.len();
            let traj = (0..n)
                .map(|i| {
                    let last = i + 1 == n;
                    let end = last.then(|| if seg.success { TrajEnd::Success } else { TrajEnd::Timeout(seg.final_obs.clone()) });
                    LlRecord { obs: seg.obs[i].clone(), action: seg.actions[i], reward: if last && seg.success { 1.0 } else { 0.0 }, end }
                })
                .collect();
            self.push(seg.skill, traj);
        }
        let total: usize = segments.iter().map(Segment::len).sum();
        debug_assert_eq!(total, goal_rewards.len());
        let success = goal_rewards.last().is_some_and(|&r| r > 0.0);
        if total == 0 || (!success && !self.cfg.relabel_failures) {
            return;
        }
        let mut traj = Vec::with_capacity(total);
        for seg in segments {
            for (o, &a) in seg.obs.iter().zip(&seg.actions) {
                traj.push(LlRecord { obs: o.clone(), action: a, reward: goal_rewards[traj.len()], end: None });
            }
        }
        let final_obs = segments.iter().rev().find(|s| !s.is_empty()).map(|s| s.final_obs.clone()).unwrap();
        traj.last_mut().unwrap().end = Some(if success { TrajEnd::Success } else { TrajEnd::Timeout(final_obs) });
        self.push(goal, traj);
    }

    /// Skills whose buffer has enough new transitions, in id order.
    pub fn due(&self) -> Vec<SkillId> {
        self.buffers
            .iter()
            .filter(|(s, b)| b.new_since_update() >= self.cfg.update_every && self.policies.contains_key(s))
            .map(|(&s, _)| s)
            .collect()
    }

    /// Runs one AWR update for `skill` if it is due.
    pub fn awr_update(&mut self, skill: SkillId) -> Option<LlTrainStats> {
        let buffer = self.buffers.get(&skill)?;
        if buffer.new_since_update() < self.cfg.update_every || buffer.is_empty() {
            return None;
        }
        let policy = self.policies.get(&skill)?;
        let net = &self.net;
        let records = buffer.records();
        let returns = discounted_returns(records, self.cfg.gamma, |o| net.value(&policy.params, o));
        let new = buffer.new_since_update();
        let buffer_len = buffer.len();
        let steps = ((self.cfg.epochs * new as f64) / self.cfg.batch_size as f64).ceil().max(1.0) as usize;
        let batch_size = self.cfg.batch_size.min(buffer_len);
        let mut policy = policy.clone();
        let mut acc = (0.0, 0.0, 0.0);
        for _ in 0..steps {
            let batch: Vec<AwrSample> = (0..batch_size)
                .map(|_| {
                    let i = self.rng.gen_range(0..buffer_len);
                    AwrSample { x: net.features(&records[i].obs), action: records[i].action.index(), ret: returns[i] }
                })
                .collect();
            let (loss, mut grad) = awr_loss_and_grad(net, &policy.params, &batch, None, self.cfg.beta_awr, self.cfg.w_max, self.cfg.critic_coef);
            clip_grad_norm(&mut grad, self.cfg.grad_clip);
            policy.adam.step(&mut policy.params, &grad);
            acc.0 += loss.actor / steps as f64;
            acc.1 += loss.critic / steps as f64;
            acc.2 += loss.mean_weight / steps as f64;
        }
        policy.updates += 1;
        let mean_return = returns.iter().sum::<f64>() / buffer_len as f64;
        let update = policy.updates;
        self.policies.insert(skill, policy);
        self.buffers.get_mut(&skill).unwrap().mark_consumed();
        Some(LlTrainStats {
            skill,
            update,
            buffer_len,
            new_transitions: new,
            steps,
            actor_loss: acc.0,
            critic_loss: acc.1,
            mean_weight: acc.2,
            mean_return,
        })
    }
}
