use rand::Rng;
use serde::{Deserialize, Serialize};

use super::trie::SkillTrie;
use crate::goalspace::{SkillId, Token};
use crate::lowlevel::ActMode;
use crate::nn::{masked_log_softmax, sigmoid, Activation, Mlp};

/// Longest token sequence the head is conditioned on by position.
pub const MAX_TOKENS: usize = 8;

/// Context encoder, autoregressive token head and value head over one flat
/// parameter vector laid out `[context | token | value]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighLevelNet {
    pub context: Mlp,
    pub token: Mlp,
    pub value: Mlp,
    pub vocab: usize,
}

/// A decoded skill with everything the update needs to replay the decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    pub skill: SkillId,
    pub tokens: Vec<Token>,
    /// Allowed tokens at each position.
    pub masks: Vec<Vec<Token>>,
    /// Behaviour log-probability of each emitted token.
    pub logps: Vec<f64>,
    /// Reference log-probabilities over each mask, aligned with `masks`.
    pub ref_logps: Vec<Vec<f64>>,
}

impl Decoded {
    pub fn log_prob(&self) -> f64 {
        self.logps.iter().sum()
    }
}


impl HighLevelNet {
    pub fn new(input: usize, vocab: usize, context_width: usize, token_hidden: usize, value_hidden: &[usize]) -> Self {
        let context = Mlp::new(vec![input, context_width], Activation::Relu, Activation::Relu);
        let token = Mlp::new(vec![context_width + 2 * vocab + MAX_TOKENS, token_hidden, vocab], Activation::Tanh, Activation::Identity);
        let mut vdims = vec![context_width];
        vdims.extend(value_hidden);
        vdims.push(1);
        let value = Mlp::new(vdims, Activation::Relu, Activation::Identity);
        Self { context, token, value, vocab }
    }

    pub fn n_params(&self) -> usize {
        self.context.n_params() + self.token.n_params() + self.value.n_params()
    }

    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut p = self.context.init(rng, 1.0);
        p.extend(self.token.init(rng, 0.1));
        p.extend(self.value.init(rng, 0.1));
        p
    }

    pub(crate) fn split<'a>(&self, params: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let (c, rest) = params.split_at(self.context.n_params());
        let (t, v) = rest.split_at(self.token.n_params());
        (c, t, v)
    }

    pub(crate) fn split_mut<'a>(&self, grad: &'a mut [f64]) -> (&'a mut [f64], &'a mut [f64], &'a mut [f64]) {
        let (c, rest) = grad.split_at_mut(self.context.n_params());
        let (t, v) = rest.split_at_mut(self.token.n_params());
        (c, t, v)
    }


    /// Token-head input for position `pos` after `prefix`.
    pub(crate) fn token_input(&self, ctx: &[f64], prefix: &[Token]) -> Vec<f64> {
        let w = ctx.len();
        let mut x = vec![0.0; w + 2 * self.vocab + MAX_TOKENS];
        x[..w].copy_from_slice(ctx);
        if let Some(&prev) = prefix.last() {
            x[w + prev as usize] = 1.0;
        }
        for &t in prefix {
            x[w + self.vocab + t as usize] = 1.0;
        }
        x[w + 2 * self.vocab + prefix.len().min(MAX_TOKENS - 1)] = 1.0;
        x
    }

    pub(crate) fn token_logits(&self, params: &[f64], ctx: &[f64], prefix: &[Token]) -> Vec<f64> {
        self.token.predict(self.split(params).1, &self.token_input(ctx, prefix))
    }

    pub fn value(&self, params: &[f64], x: &[f64]) -> f64 {
        let (c, _, v) = self.split(params);
        sigmoid(self.value.predict(v, &self.context.predict(c, x))[0])
    }

    /// Masked log-probabilities over `mask`, aligned with it.
    pub fn masked_logps(&self, params: &[f64], ctx: &[f64], prefix: &[Token], mask: &[Token]) -> Vec<f64> {
        let logits = self.token_logits(params, ctx, prefix);
        let idx: Vec<usize> = mask.iter().map(|&t| t as usize).collect();
        let lp = masked_log_softmax(&logits, Some(&idx));
        idx.iter().map(|&i| lp[i]).collect()
    }

    /// Walks the trie token by token under masked distributions.
    pub fn decode<R: Rng + ?Sized>(
        &self,
        params: &[f64],
        reference: Option<&[f64]>,
        x: &[f64],
        trie: &SkillTrie,
        mode: ActMode,
        rng: &mut R,
    ) -> Decoded {
        assert!(!trie.is_empty(), "cannot decode from an empty skill set");
        let ctx = self.context.predict(self.split(params).0, x);
        let ref_ctx = reference.map(|r| self.context.predict(self.split(r).0, x));
        let mut node = SkillTrie::ROOT;
        let mut out = Decoded { skill: 0, tokens: Vec::new(), masks: Vec::new(), logps: Vec::new(), ref_logps: Vec::new() };
        loop {
            if let Some(skill) = trie.skill_at(node) {
                out.skill = skill;
                return out;
            }
            let mask = trie.allowed(node);
            let lp = self.masked_logps(params, &ctx, &out.tokens, &mask);
            let k = match mode {
                ActMode::Greedy => (0..lp.len()).fold(0, |b, i| if lp[i] > lp[b] { i } else { b }),
                ActMode::Sample => {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    lp.iter()
                        .position(|&l| {
                            acc += l.exp();
                            u < acc
                        })
                        .unwrap_or(lp.len() - 1)
                }
            };
            let ref_lp = match (reference, &ref_ctx) {
                (Some(r), Some(rc)) => self.masked_logps(r, rc, &out.tokens, &mask),
                _ => lp.clone(),
            };
            out.logps.push(lp[k]);
            out.ref_logps.push(ref_lp);
            out.tokens.push(mask[k]);
            out.masks.push(mask);
            node = trie.child(node, out.tokens[out.tokens.len() - 1]).unwrap();
        }
    }

    /// Log-probability of a full token path under masking.
    pub fn path_log_prob(&self, params: &[f64], x: &[f64], trie: &SkillTrie, tokens: &[Token]) -> f64 {
        let ctx = self.context.predict(self.split(params).0, x);
        let mut node = SkillTrie::ROOT;
        let mut total = 0.0;
        for (i, &t) in tokens.iter().enumerate() {
            let mask = trie.allowed(node);
            let lp = self.masked_logps(params, &ctx, &tokens[..i], &mask);
            total += lp[mask.iter().position(|&m| m == t).expect("token outside trie")];
            node = trie.child(node, t).unwrap();
        }
        total
    }
}
