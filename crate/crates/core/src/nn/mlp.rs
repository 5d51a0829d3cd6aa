use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{init_uniform, Activation};

/// Fully connected network. Weights of layer `l` are stored input-major
/// (`w[i * out + o]`) followed by the `out` biases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    dims: Vec<usize>,
    hidden: Activation,
    output: Activation,
}

#[derive(Clone, Debug, Default)]
pub struct MlpTrace {
    /// Input of every layer (the first entry is the network input).
    inputs: Vec<Vec<f64>>,
    /// Pre-activations of every layer.
    pre: Vec<Vec<f64>>,
    pub output: Vec<f64>,
}

impl Mlp {
    pub fn new(dims: Vec<usize>, hidden: Activation, output: Activation) -> Self {
        assert!(dims.len() >= 2, "an MLP needs at least input and output widths");
        Self { dims, hidden, output }
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_params(&self) -> usize {
        self.dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    /// Glorot-uniform weights, zero biases. The last layer is scaled by `last_gain`
    /// so that heads can start near-uniform.
    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R, last_gain: f64) -> Vec<f64> {
        let mut params = Vec::with_capacity(self.n_params());
        let n_layers = self.dims.len() - 1;
        for (l, w) in self.dims.windows(2).enumerate() {
            let gain = if l + 1 == n_layers { last_gain } else { 1.0 };
            let mut draw = init_uniform(rng, w[0], w[1], gain);
            for _ in 0..w[0] * w[1] {
                params.push(draw());
            }
            params.extend(std::iter::repeat(0.0).take(w[1]));
        }
        params
    }

    fn activation(&self, layer: usize) -> Activation {
        if layer + 2 == self.dims.len() {
            self.output
        } else {
            self.hidden
        }
    }

    pub fn predict(&self, params: &[f64], x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(params.len(), self.n_params());
        let mut h = x.to_vec();
        let mut offset = 0;
        for l in 0..self.dims.len() - 1 {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let z = affine(&params[offset..offset + n_in * n_out + n_out], &h, n_in, n_out);
            offset += n_in * n_out + n_out;
            let act = self.activation(l);
            h = z.into_iter().map(|v| act.apply(v)).collect();
        }
        h
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> MlpTrace {
        debug_assert_eq!(params.len(), self.n_params());
        debug_assert_eq!(x.len(), self.input_dim());
        let n_layers = self.dims.len() - 1;
        let mut trace = MlpTrace { inputs: Vec::with_capacity(n_layers), pre: Vec::with_capacity(n_layers), output: Vec::new() };
        let mut h = x.to_vec();
        let mut offset = 0;
        for l in 0..n_layers {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let z = affine(&params[offset..offset + n_in * n_out + n_out], &h, n_in, n_out);
            offset += n_in * n_out + n_out;
            let act = self.activation(l);
            let next: Vec<f64> = z.iter().map(|&v| act.apply(v)).collect();
            trace.inputs.push(h);
            trace.pre.push(z);
            h = next;
        }
        trace.output = h;
        trace
    }

    /// Accumulates dL/dparams into `grad` given dL/doutput. Returns dL/dinput when
    /// `want_input_grad` is set.
    pub fn backward(
        &self,
        params: &[f64],
        trace: &MlpTrace,
        d_out: &[f64],
        grad: &mut [f64],
        want_input_grad: bool,
    ) -> Option<Vec<f64>> {
        debug_assert_eq!(grad.len(), self.n_params());
        let n_layers = self.dims.len() - 1;
        let mut offsets = Vec::with_capacity(n_layers);
        let mut off = 0;
        for w in self.dims.windows(2) {
            offsets.push(off);
            off += w[0] * w[1] + w[1];
        }
        let mut delta: Vec<f64> = d_out.to_vec();
        for l in (0..n_layers).rev() {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let act = self.activation(l);
            for (d, &z) in delta.iter_mut().zip(&trace.pre[l]) {
                *d *= act.derivative(z);
            }
            let base = offsets[l];
            let input = &trace.inputs[l];
            {
                let (gw, gb) = grad[base..base + n_in * n_out + n_out].split_at_mut(n_in * n_out);
                for (i, &xi) in input.iter().enumerate() {
                    if xi == 0.0 {
                        continue;
                    }
                    let row = &mut gw[i * n_out..(i + 1) * n_out];
                    for (g, &d) in row.iter_mut().zip(&delta) {
                        *g += xi * d;
                    }
                }
                for (g, &d) in gb.iter_mut().zip(&delta) {
                    *g += d;
                }
            }
            if l == 0 && !want_input_grad {
                return None;
            }
            let w = &params[base..base + n_in * n_out];
            let mut prev = vec![0.0; n_in];
            for (i, p) in prev.iter_mut().enumerate() {
                let row = &w[i * n_out..(i + 1) * n_out];
                *p = row.iter().zip(&delta).map(|(a, b)| a * b).sum();
            }
            delta = prev;
        }
        Some(delta)
    }
}

/// `z = W^T x + b`, skipping zero inputs (observation encodings are mostly one-hot).
fn affine(layer: &[f64], x: &[f64], n_in: usize, n_out: usize) -> Vec<f64> {
    let (w, b) = layer.split_at(n_in * n_out);
    let mut z = b.to_vec();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        let row = &w[i * n_out..(i + 1) * n_out];
        for (zo, &wo) in z.iter_mut().zip(row) {
            *zo += xi * wo;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for hidden in [Activation::Tanh, Activation::Silu, Activation::Relu] {
            let net = Mlp::new(vec![4, 5, 3], hidden, Activation::Sigmoid);
            let params = net.init(&mut rng, 1.0);
            let x = [0.3, -1.2, 0.0, 0.8];
            let w = [0.5, -1.0, 2.0];
            let loss = |p: &[f64]| net.predict(p, &x).iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            let trace = net.forward(&params, &x);
            let mut grad = vec![0.0; net.n_params()];
            let dx = net.backward(&params, &trace, &w, &mut grad, true).unwrap();
            let h = 1e-6;
            for k in 0..params.len() {
                let mut p = params.clone();
                p[k] += h;
                let up = loss(&p);
                p[k] -= 2.0 * h;
                let down = loss(&p);
                let fd = (up - down) / (2.0 * h);
                assert!((fd - grad[k]).abs() < 1e-6 * (1.0 + fd.abs()), "{hidden:?} param {k}: {fd} vs {}", grad[k]);
            }
            // input gradient for the non-zero inputs
            for i in [0, 1, 3] {
                let mut xp = x;
                xp[i] += h;
                let up = net.predict(&params, &xp).iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
                xp[i] -= 2.0 * h;
                let down = net.predict(&params, &xp).iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
                assert!(((up - down) / (2.0 * h) - dx[i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn predict_matches_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = Mlp::new(vec![3, 8, 8, 2], Activation::Relu, Activation::Identity);
        let p = net.init(&mut rng, 0.1);
        let x = [1.0, 0.0, -0.5];
        assert_eq!(net.predict(&p, &x), net.forward(&p, &x).output);
    }
}
