use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::policy::{Decoded, HighLevelNet};
use crate::nn::{clip_grad_norm, masked_log_softmax, sigmoid, Adam};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PpoConfig {
    pub lr: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub epochs: usize,
    pub clip: f64,
    pub entropy_coef: f64,
    pub beta_kl: f64,
    pub value_coef: f64,
    pub minibatch: usize,
    pub grad_clip: f64,
    pub normalize_advantages: bool,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            lr: 1e-5,
            gamma: 0.95,
            lambda: 0.9,
            epochs: 4,
            clip: 0.2,
            entropy_coef: 0.01,
            beta_kl: 0.1,
            value_coef: 0.5,
            minibatch: 256,
            grad_clip: 1.0,
            normalize_advantages: true,
        }
    }
}

/// One high-level decision and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HlTransition {
    pub features: Vec<f64>,
    pub decoded: Decoded,
    pub reward: f64,
    pub done: bool,
    pub value: f64,
}

/// Generalized advantage estimates and returns for one ordered stream.
/// `last_value` bootstraps a stream whose final transition is not terminal.
pub fn gae(rewards: &[f64], values: &[f64], dones: &[bool], last_value: f64, gamma: f64, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let n = rewards.len();
    let mut adv = vec![0.0; n];
    let mut next_adv = 0.0;
    let mut next_value = last_value;
    for t in (0..n).rev() {
        let keep = if dones[t] { 0.0 } else { 1.0 };
        let delta = rewards[t] + gamma * next_value * keep - values[t];
        next_adv = delta + gamma * lambda * keep * next_adv;
        adv[t] = next_adv;
        next_value = values[t];
    }
    let returns = adv.iter().zip(values).map(|(a, v)| a + v).collect();
    (adv, returns)
}

pub struct PpoSample<'a> {
    pub transition: &'a HlTransition,
    pub advantage: f64,
    pub ret: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PpoLoss {
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub kl_ref: f64,
    pub clip_fraction: f64,
}

impl PpoLoss {
    pub fn total(&self, cfg: &PpoConfig) -> f64 {
        self.policy + cfg.value_coef * self.value - cfg.entropy_coef * self.entropy + cfg.beta_kl * self.kl_ref
    }
}

/// Token-level clipped surrogate with entropy bonus, KL to the reference and a
/// value regression term. Token terms average over tokens, the value term over
/// transitions.
pub fn ppo_loss_and_grad(net: &HighLevelNet, params: &[f64], batch: &[PpoSample<'_>], cfg: &PpoConfig) -> (PpoLoss, Vec<f64>) {
    let mut grad = vec![0.0; params.len()];
    let mut loss = PpoLoss::default();
    let n_tokens = batch.iter().map(|s| s.transition.decoded.tokens.len()).sum::<usize>().max(1) as f64;
    let n = batch.len().max(1) as f64;
    let (pc, pt, pv) = net.split(params);
    for s in batch {
        let tr = s.transition;
        let ctx_trace = net.context.forward(pc, &tr.features);
        let ctx = &ctx_trace.output;
        let mut d_ctx = vec![0.0; ctx.len()];
        let (_, gt, gv) = net.split_mut(&mut grad);
        let d = &tr.decoded;
        for i in 0..d.tokens.len() {
            let input = net.token_input(ctx, &d.tokens[..i]);
            let trace = net.token.forward(pt, &input);
            let mask: Vec<usize> = d.masks[i].iter().map(|&t| t as usize).collect();
            let lp_full = masked_log_softmax(&trace.output, Some(&mask));
            let lp: Vec<f64> = mask.iter().map(|&m| lp_full[m]).collect();
            let p: Vec<f64> = lp.iter().map(|l| l.exp()).collect();
            let a = d.masks[i].iter().position(|&t| t == d.tokens[i]).unwrap();
            let ratio = (lp[a] - d.logps[i]).exp();
            let unclipped = ratio * s.advantage;
            let clipped = ratio.clamp(1.0 - cfg.clip, 1.0 + cfg.clip) * s.advantage;
            loss.policy -= unclipped.min(clipped) / n_tokens;
            let d_logp = if unclipped <= clipped {
                -ratio * s.advantage / n_tokens
            } else {
                loss.clip_fraction += 1.0 / n_tokens;
                0.0
            };
            let entropy: f64 = -p.iter().zip(&lp).map(|(p, l)| p * l).sum::<f64>();
            let kl: f64 = p.iter().zip(&lp).zip(&d.ref_logps[i]).map(|((p, l), q)| p * (l - q)).sum();
            loss.entropy += entropy / n_tokens;
            loss.kl_ref += kl / n_tokens;
            let mut d_logits = vec![0.0; trace.output.len()];
            for (j, &m) in mask.iter().enumerate() {
                let onehot = if j == a { 1.0 } else { 0.0 };
                let g_surr = d_logp * (onehot - p[j]);
                let g_ent = -p[j] * (lp[j] + entropy);
                let g_kl = p[j] * (lp[j] - d.ref_logps[i][j] - kl);
                d_logits[m] = g_surr - cfg.entropy_coef * g_ent / n_tokens + cfg.beta_kl * g_kl / n_tokens;
            }
            let d_in = net.token.backward(pt, &trace, &d_logits, gt, true).unwrap();
            for (dc, di) in d_ctx.iter_mut().zip(&d_in) {
                *dc += di;
            }
        }
        let vtrace = net.value.forward(pv, ctx);
        let v = sigmoid(vtrace.output[0]);
        loss.value += (v - s.ret).powi(2) / n;
        let dv = cfg.value_coef * 2.0 * (v - s.ret) * v * (1.0 - v) / n;
        let d_in = net.value.backward(pv, &vtrace, &[dv], gv, true).unwrap();
        for (dc, di) in d_ctx.iter_mut().zip(&d_in) {
            *dc += di;
        }
        let (gc, _, _) = net.split_mut(&mut grad);
        net.context.backward(pc, &ctx_trace, &d_ctx, gc, false);
    }
    (loss, grad)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HlTrainStats {
    pub update: u64,
    pub transitions: usize,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub kl_ref: f64,
    pub clip_fraction: f64,
    pub mean_skill_len: f64,
    pub mean_advantage: f64,
}

/// Trainable high-level policy with its frozen reference copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighLevelPolicy {
    pub net: HighLevelNet,
    pub params: Vec<f64>,
    pub reference: Vec<f64>,
    adam: Adam,
    updates: u64,
}

impl HighLevelPolicy {
    pub fn new<R: Rng + ?Sized>(net: HighLevelNet, lr: f64, rng: &mut R) -> Self {
        let params = net.init(rng);
        Self { adam: Adam::new(params.len(), lr), reference: params.clone(), params, net, updates: 0 }
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// GAE per stream, then `epochs` passes of shuffled minibatches.
    pub fn ppo_update<R: Rng + ?Sized>(&mut self, streams: &[Vec<HlTransition>], bootstrap: &[f64], cfg: &PpoConfig, rng: &mut R) -> HlTrainStats {
        let mut samples = Vec::new();
        for (stream, &last) in streams.iter().zip(bootstrap) {
            let r: Vec<f64> = stream.iter().map(|t| t.reward).collect();
            let v: Vec<f64> = stream.iter().map(|t| t.value).collect();
            let d: Vec<bool> = stream.iter().map(|t| t.done).collect();
            let (adv, ret) = gae(&r, &v, &d, last, cfg.gamma, cfg.lambda);
            for ((t, a), r) in stream.iter().zip(adv).zip(ret) {
                samples.push(PpoSample { transition: t, advantage: a, ret: r });
            }
        }
        let mean_advantage = samples.iter().map(|s| s.advantage).sum::<f64>() / samples.len().max(1) as f64;
        if cfg.normalize_advantages && samples.len() > 1 {
            let var = samples.iter().map(|s| (s.advantage - mean_advantage).powi(2)).sum::<f64>() / samples.len() as f64;
            let std = var.sqrt().max(1e-8);
            for s in &mut samples {
                s.advantage = (s.advantage - mean_advantage) / std;
            }
        }
        let mut totals = PpoLoss::default();
        let mut batches = 0.0;
        for _ in 0..cfg.epochs {
            samples.shuffle(rng);
            for chunk in samples.chunks(cfg.minibatch.max(1)) {
                let (loss, mut grad) = ppo_loss_and_grad(&self.net, &self.params, chunk, cfg);
                clip_grad_norm(&mut grad, cfg.grad_clip);
                self.adam.step(&mut self.params, &grad);
                totals.policy += loss.policy;
                totals.value += loss.value;
                totals.entropy += loss.entropy;
                totals.kl_ref += loss.kl_ref;
                totals.clip_fraction += loss.clip_fraction;
                batches += 1.0;
            }
        }
        self.updates += 1;
        let b = f64::max(batches, 1.0);
        HlTrainStats {
            update: self.updates,
            transitions: samples.len(),
            policy_loss: totals.policy / b,
            value_loss: totals.value / b,
            entropy: totals.entropy / b,
            kl_ref: self.kl_to_reference(streams),
            clip_fraction: totals.clip_fraction / b,
            mean_skill_len: samples.iter().map(|s| s.transition.decoded.tokens.len() as f64).sum::<f64>() / samples.len().max(1) as f64,
            mean_advantage,
        }
    }

    /// Mean per-token KL from the current to the reference policy over the
    /// visited contexts and their masks.
    pub fn kl_to_reference(&self, streams: &[Vec<HlTransition>]) -> f64 {
        let (mut total, mut count) = (0.0, 0usize);
        let (pc, _, _) = self.net.split(&self.params);
        for t in streams.iter().flatten() {
            let ctx = self.net.context.predict(pc, &t.features);
            let d = &t.decoded;
            for i in 0..d.tokens.len() {
                let lp = self.net.masked_logps(&self.params, &ctx, &d.tokens[..i], &d.masks[i]);
                total += lp.iter().zip(&d.ref_logps[i]).map(|(l, q)| l.exp() * (l - q)).sum::<f64>();
                count += 1;
            }
        }
        total / count.max(1) as f64
    }
}
