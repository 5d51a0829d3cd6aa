//! Minimal dense and convolutional networks with hand-written backward passes.
//!
//! Every model keeps its parameters in one flat `Vec<f64>`; layers are views
//! at fixed offsets. That makes optimizer state, checkpointing and finite
//! difference probes uniform across architectures.

mod adam;
mod conv;
mod encoder;
mod mlp;

pub use adam::{clip_grad_norm, Adam};
pub use conv::{ResNet, ResNetTrace};
pub use encoder::{Encoder, EncoderSpec, EncoderTrace};
pub use mlp::{Mlp, MlpTrace};

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Identity,
    Relu,
    Tanh,
    Silu,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
            Activation::Tanh => x.tanh(),
            Activation::Silu => x * sigmoid(x),
            Activation::Sigmoid => sigmoid(x),
        }
    }

    /// Derivative with respect to the pre-activation `x`.
    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            Activation::Silu => {
                let s = sigmoid(x);
                s * (1.0 + x * (1.0 - s))
            }
            Activation::Sigmoid => {
                let s = sigmoid(x);
                s * (1.0 - s)
            }
        }
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Log-softmax over the entries selected by `mask` (all entries when `None`).
/// Masked-out entries get `f64::NEG_INFINITY`.
pub fn masked_log_softmax(logits: &[f64], mask: Option<&[usize]>) -> Vec<f64> {
    let mut out = vec![f64::NEG_INFINITY; logits.len()];
    match mask {
        Some(allowed) => {
            let max = allowed.iter().map(|&i| logits[i]).fold(f64::NEG_INFINITY, f64::max);
            let lse = allowed.iter().map(|&i| (logits[i] - max).exp()).sum::<f64>().ln() + max;
            for &i in allowed {
                out[i] = logits[i] - lse;
            }
        }
        None => {
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = logits.iter().map(|&l| (l - max).exp()).sum::<f64>().ln() + max;
            for (o, &l) in out.iter_mut().zip(logits) {
                *o = l - lse;
            }
        }
    }
    out
}

pub(crate) fn init_uniform<R: Rng + ?Sized>(rng: &mut R, fan_in: usize, fan_out: usize, gain: f64) -> impl FnMut() -> f64 + '_ {
    let bound = gain * (6.0 / (fan_in + fan_out) as f64).sqrt();
    move || rng.gen_range(-bound..bound)
}
