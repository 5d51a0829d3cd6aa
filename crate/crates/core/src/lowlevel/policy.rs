use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::craftworld::{ElementaryAction, VisualObs};
use crate::nn::{masked_log_softmax, sigmoid, Activation, Adam, Encoder, EncoderSpec, EncoderTrace, Mlp, MlpTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActMode {
    Sample,
    Greedy,
}

const N_ACTIONS: usize = ElementaryAction::COUNT;

/// Encoder plus a joint head: 16 action logits and one critic logit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlNet {
    pub encoder: Encoder,
    pub head: Mlp,
    planar: bool,
    view: usize,
}

pub struct LlTrace {
    enc: EncoderTrace,
    head: MlpTrace,
}

impl LlTrace {
    pub fn logits(&self) -> &[f64] {
        &self.head.output[..N_ACTIONS]
    }

    pub fn value(&self) -> f64 {
        sigmoid(self.head.output[N_ACTIONS])
    }
}

impl LlNet {
    pub fn new(spec: &EncoderSpec, view: usize) -> Self {
        let planar = matches!(spec, EncoderSpec::ResNet { .. });
        let encoder = Encoder::build(spec, VisualObs::flat_dim(view), Some((VisualObs::plane_channels(), view)));
        let head = Mlp::new(vec![encoder.output_dim(), N_ACTIONS + 1], Activation::Identity, Activation::Identity);
        Self { encoder, head, planar, view }
    }

    pub fn n_params(&self) -> usize {
        self.encoder.n_params() + self.head.n_params()
    }

    pub fn view(&self) -> usize {
        self.view
    }

    /// Small final-layer gain keeps the initial action distribution near uniform.
    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut p = self.encoder.init(rng);
        p.extend(self.head.init(rng, 0.01));
        p
    }

    pub fn features(&self, obs: &VisualObs) -> Vec<f64> {
        if self.planar {
            obs.planes()
        } else {
            obs.flat_features()
        }
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> LlTrace {
        let (pe, ph) = params.split_at(self.encoder.n_params());
        let enc = self.encoder.forward(pe, x);
        let head = self.head.forward(ph, enc.output());
        LlTrace { enc, head }
    }

    pub fn backward(&self, params: &[f64], trace: &LlTrace, d_out: &[f64], grad: &mut [f64]) {
        let n = self.encoder.n_params();
        let (pe, ph) = params.split_at(n);
        let (ge, gh) = grad.split_at_mut(n);
        let d_enc = self.head.backward(ph, &trace.head, d_out, gh, true).unwrap();
        self.encoder.backward(pe, &trace.enc, &d_enc, ge);
    }

    /// Action probabilities and critic value.
    pub fn evaluate(&self, params: &[f64], obs: &VisualObs) -> ([f64; N_ACTIONS], f64) {
        let (pe, ph) = params.split_at(self.encoder.n_params());
        let out = self.head.predict(ph, &self.encoder.predict(pe, &self.features(obs)));
        let logp = masked_log_softmax(&out[..N_ACTIONS], None);
        let mut probs = [0.0; N_ACTIONS];
        for (p, l) in probs.iter_mut().zip(logp) {
            *p = l.exp();
        }
        (probs, sigmoid(out[N_ACTIONS]))
    }

    pub fn value(&self, params: &[f64], obs: &VisualObs) -> f64 {
        self.evaluate(params, obs).1
    }
}

/// One skill's policy with its optimizer state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlPolicy {
    pub params: Vec<f64>,
    pub adam: Adam,
    pub updates: u64,
}

impl LlPolicy {
    pub fn new<R: Rng + ?Sized>(net: &LlNet, lr: f64, rng: &mut R) -> Self {
        let params = net.init(rng);
        Self { adam: Adam::new(params.len(), lr), params, updates: 0 }
    }

    pub fn act<R: Rng + ?Sized>(&self, net: &LlNet, obs: &VisualObs, mode: ActMode, rng: &mut R) -> ElementaryAction {
        let (probs, _) = net.evaluate(&self.params, obs);
        let i = match mode {
            ActMode::Greedy => probs.iter().enumerate().fold(0, |best, (i, &p)| if p > probs[best] { i } else { best }),
            ActMode::Sample => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                probs
                    .iter()
                    .position(|&p| {
                        acc += p;
                        u < acc
                    })
                    .unwrap_or(N_ACTIONS - 1)
            }
        };
        ElementaryAction::from_index(i).unwrap()
    }
}
