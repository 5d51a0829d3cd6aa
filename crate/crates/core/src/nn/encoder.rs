use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Activation, Mlp, MlpTrace, ResNet, ResNetTrace};

/// Architecture of an observation encoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderSpec {
    /// Dense layers over the flattened observation.
    Mlp { hidden: Vec<usize> },
    /// Residual convolutional trunk followed by dense layers.
    ResNet { channels: Vec<usize>, hidden: Vec<usize> },
}

/// Encoder instance: either a plain MLP, or a ResNet trunk feeding an MLP.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Encoder {
    Mlp(Mlp),
    ResNet { trunk: ResNet, head: Mlp },
}

pub enum EncoderTrace {
    Mlp(MlpTrace),
    ResNet(ResNetTrace, MlpTrace),
}

impl EncoderTrace {
    pub fn output(&self) -> &[f64] {
        match self {
            EncoderTrace::Mlp(t) => &t.output,
            EncoderTrace::ResNet(_, t) => &t.output,
        }
    }
}

impl Encoder {
    /// `flat_dim` is the dense input width; `planes` gives `(channels, side)` when
    /// the input is laid out as image planes (required for the ResNet variant).
    pub fn build(spec: &EncoderSpec, flat_dim: usize, planes: Option<(usize, usize)>) -> Self {
        match spec {
            EncoderSpec::Mlp { hidden } => {
                let mut dims = vec![flat_dim];
                dims.extend(hidden);
                Encoder::Mlp(Mlp::new(dims, Activation::Relu, Activation::Relu))
            }
            EncoderSpec::ResNet { channels, hidden } => {
                let (c, side) = planes.expect("a convolutional encoder needs planar input");
                let trunk = ResNet::new(c, side, channels.clone());
                let mut dims = vec![trunk.output_dim()];
                dims.extend(hidden);
                Encoder::ResNet { trunk, head: Mlp::new(dims, Activation::Relu, Activation::Relu) }
            }
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            Encoder::Mlp(m) => m.n_params(),
            Encoder::ResNet { trunk, head } => trunk.n_params() + head.n_params(),
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Encoder::Mlp(m) => m.output_dim(),
            Encoder::ResNet { head, .. } => head.output_dim(),
        }
    }

    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Encoder::Mlp(m) => m.init(rng, 1.0),
            Encoder::ResNet { trunk, head } => {
                let mut p = trunk.init(rng);
                p.extend(head.init(rng, 1.0));
                p
            }
        }
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> EncoderTrace {
        match self {
            Encoder::Mlp(m) => EncoderTrace::Mlp(m.forward(params, x)),
            Encoder::ResNet { trunk, head } => {
                let (pt, ph) = params.split_at(trunk.n_params());
                let t = trunk.forward(pt, x);
                let h = head.forward(ph, &t.output);
                EncoderTrace::ResNet(t, h)
            }
        }
    }

    pub fn predict(&self, params: &[f64], x: &[f64]) -> Vec<f64> {
        match self {
            Encoder::Mlp(m) => m.predict(params, x),
            Encoder::ResNet { trunk, head } => {
                let (pt, ph) = params.split_at(trunk.n_params());
                head.predict(ph, &trunk.forward(pt, x).output)
            }
        }
    }

    /// Accumulates parameter gradients. Input gradients are not needed by any caller.
    pub fn backward(&self, params: &[f64], trace: &EncoderTrace, d_out: &[f64], grad: &mut [f64]) {
        match (self, trace) {
            (Encoder::Mlp(m), EncoderTrace::Mlp(t)) => {
                m.backward(params, t, d_out, grad, false);
            }
            (Encoder::ResNet { trunk, head }, EncoderTrace::ResNet(tt, th)) => {
                let n = trunk.n_params();
                let (pt, ph) = params.split_at(n);
                let (gt, gh) = grad.split_at_mut(n);
                let d_trunk = head.backward(ph, th, d_out, gh, true).unwrap();
                trunk.backward(pt, tt, &d_trunk, gt);
            }
            _ => unreachable!("trace does not match encoder"),
        }
    }
}
