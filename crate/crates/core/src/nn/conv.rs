use rand::Rng;
use serde::{Deserialize, Serialize};

use super::init_uniform;

/// Residual convolutional encoder over `[channels][side][side]` planes.
///
/// `widths[0]` is a stem 3x3 convolution; every further width adds a stage made
/// of a 3x3 projection followed by one residual block
/// `h + conv(relu(conv(relu(h))))`. The output is `relu(h)` flattened.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResNet {
    in_channels: usize,
    side: usize,
    widths: Vec<usize>,
}

#[derive(Clone, Debug)]
struct StageTrace {
    input: Vec<f64>,
    proj: Vec<f64>,
    mid: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ResNetTrace {
    input: Vec<f64>,
    stem: Vec<f64>,
    stages: Vec<StageTrace>,
    last: Vec<f64>,
    pub output: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Conv {
    offset: usize,
    c_in: usize,
    c_out: usize,
}

impl Conv {
    fn n_params(c_in: usize, c_out: usize) -> usize {
        c_out * c_in * 9 + c_out
    }

    fn forward(&self, params: &[f64], x: &[f64], side: usize) -> Vec<f64> {
        let n = side * side;
        let w = &params[self.offset..self.offset + self.c_out * self.c_in * 9];
        let b = &params[self.offset + self.c_out * self.c_in * 9..self.offset + Self::n_params(self.c_in, self.c_out)];
        let mut out = vec![0.0; self.c_out * n];
        for o in 0..self.c_out {
            let plane = &mut out[o * n..(o + 1) * n];
            plane.iter_mut().for_each(|v| *v = b[o]);
            for i in 0..self.c_in {
                let src = &x[i * n..(i + 1) * n];
                if src.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let k = &w[(o * self.c_in + i) * 9..(o * self.c_in + i) * 9 + 9];
                for y in 0..side {
                    for xx in 0..side {
                        let mut acc = 0.0;
                        for ky in 0..3 {
                            let sy = y as isize + ky as isize - 1;
                            if sy < 0 || sy >= side as isize {
                                continue;
                            }
                            for kx in 0..3 {
                                let sx = xx as isize + kx as isize - 1;
                                if sx < 0 || sx >= side as isize {
                                    continue;
                                }
                                acc += k[ky * 3 + kx] * src[sy as usize * side + sx as usize];
                            }
                        }
                        plane[y * side + xx] += acc;
                    }
                }
            }
        }
        out
    }

    fn backward(&self, params: &[f64], x: &[f64], d_out: &[f64], grad: &mut [f64], side: usize) -> Vec<f64> {
        let n = side * side;
        let wlen = self.c_out * self.c_in * 9;
        let w = &params[self.offset..self.offset + wlen];
        let mut d_in = vec![0.0; self.c_in * n];
        for o in 0..self.c_out {
            let d_plane = &d_out[o * n..(o + 1) * n];
            grad[self.offset + wlen + o] += d_plane.iter().sum::<f64>();
            for i in 0..self.c_in {
                let src = &x[i * n..(i + 1) * n];
                let kidx = (o * self.c_in + i) * 9;
                let k = &w[kidx..kidx + 9];
                let dsrc = &mut d_in[i * n..(i + 1) * n];
                for y in 0..side {
                    for xx in 0..side {
                        let d = d_plane[y * side + xx];
                        if d == 0.0 {
                            continue;
                        }
                        for ky in 0..3 {
                            let sy = y as isize + ky as isize - 1;
                            if sy < 0 || sy >= side as isize {
                                continue;
                            }
                            for kx in 0..3 {
                                let sx = xx as isize + kx as isize - 1;
                                if sx < 0 || sx >= side as isize {
                                    continue;
                                }
                                let s = sy as usize * side + sx as usize;
                                grad[self.offset + kidx + ky * 3 + kx] += d * src[s];
                                dsrc[s] += d * k[ky * 3 + kx];
                            }
                        }
                    }
                }
            }
        }
        d_in
    }
}

fn relu(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.max(0.0)).collect()
}

fn relu_mask(d: &mut [f64], pre: &[f64]) {
    for (g, &p) in d.iter_mut().zip(pre) {
        if p <= 0.0 {
            *g = 0.0;
        }
    }
}

impl ResNet {
    pub fn new(in_channels: usize, side: usize, widths: Vec<usize>) -> Self {
        assert!(!widths.is_empty());
        Self { in_channels, side, widths }
    }

    pub fn input_dim(&self) -> usize {
        self.in_channels * self.side * self.side
    }

    pub fn output_dim(&self) -> usize {
        self.widths.last().unwrap() * self.side * self.side
    }

    fn convs(&self) -> (Conv, Vec<[Conv; 3]>) {
        let mut offset = 0;
        let mut take = |c_in, c_out| {
            let c = Conv { offset, c_in, c_out };
            offset += Conv::n_params(c_in, c_out);
            c
        };
        let stem = take(self.in_channels, self.widths[0]);
        let stages = self.widths.windows(2).map(|w| [take(w[0], w[1]), take(w[1], w[1]), take(w[1], w[1])]).collect();
        (stem, stages)
    }

    pub fn n_params(&self) -> usize {
        let mut n = Conv::n_params(self.in_channels, self.widths[0]);
        for w in self.widths.windows(2) {
            n += Conv::n_params(w[0], w[1]) + 2 * Conv::n_params(w[1], w[1]);
        }
        n
    }

    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut params = Vec::with_capacity(self.n_params());
        let mut push = |c_in: usize, c_out: usize, gain: f64| {
            let mut draw = init_uniform(rng, c_in * 9, c_out * 9, gain);
            for _ in 0..c_out * c_in * 9 {
                params.push(draw());
            }
            params.extend(std::iter::repeat(0.0).take(c_out));
        };
        push(self.in_channels, self.widths[0], 1.0);
        for w in self.widths.windows(2) {
            push(w[0], w[1], 1.0);
            push(w[1], w[1], 1.0);
            // residual branch starts small
            push(w[1], w[1], 0.1);
        }
        params
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> ResNetTrace {
        let (stem, stages) = self.convs();
        let s = stem.forward(params, x, self.side);
        let mut h = relu(&s);
        let mut traces = Vec::with_capacity(stages.len());
        for [proj, a, b] in stages {
            let p = proj.forward(params, &h, self.side);
            let c1 = a.forward(params, &relu(&p), self.side);
            let c2 = b.forward(params, &relu(&c1), self.side);
            let next: Vec<f64> = p.iter().zip(&c2).map(|(u, v)| u + v).collect();
            traces.push(StageTrace { input: std::mem::replace(&mut h, next), proj: p, mid: c1 });
        }
        let output = relu(&h);
        ResNetTrace { input: x.to_vec(), stem: s, stages: traces, last: h, output }
    }

    pub fn backward(&self, params: &[f64], trace: &ResNetTrace, d_out: &[f64], grad: &mut [f64]) -> Vec<f64> {
        let (stem, stages) = self.convs();
        let mut d_h = d_out.to_vec();
        relu_mask(&mut d_h, &trace.last);
        for ([proj, a, b], st) in stages.iter().zip(&trace.stages).rev() {
            // h_out = p + conv_b(relu(conv_a(relu(p))))
            let r1 = relu(&st.proj);
            let r2 = relu(&st.mid);
            let mut d_mid = b.backward(params, &r2, &d_h, grad, self.side);
            relu_mask(&mut d_mid, &st.mid);
            let mut d_p = a.backward(params, &r1, &d_mid, grad, self.side);
            relu_mask(&mut d_p, &st.proj);
            for (dp, dh) in d_p.iter_mut().zip(&d_h) {
                *dp += dh;
            }
            d_h = proj.backward(params, &st.input, &d_p, grad, self.side);
        }
        relu_mask(&mut d_h, &trace.stem);
        stem.backward(params, &trace.input, &d_h, grad, self.side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = ResNet::new(2, 3, vec![2, 3]);
        let params = net.init(&mut rng);
        let x: Vec<f64> = (0..net.input_dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let wts: Vec<f64> = (0..net.output_dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let loss = |p: &[f64]| net.forward(p, &x).output.iter().zip(&wts).map(|(a, b)| a * b).sum::<f64>();
        let trace = net.forward(&params, &x);
        let mut grad = vec![0.0; net.n_params()];
        net.backward(&params, &trace, &wts, &mut grad);
        let h = 1e-6;
        let mut checked = 0;
        for k in 0..params.len() {
            let mut p = params.clone();
            p[k] += h;
            let up = loss(&p);
            p[k] -= 2.0 * h;
            let down = loss(&p);
            let fd = (up - down) / (2.0 * h);
            if fd.abs() > 1e-4 {
                checked += 1;
                assert!(((fd - grad[k]) / fd).abs() < 1e-4, "param {k}: fd {fd} analytic {}", grad[k]);
            } else {
                assert!((fd - grad[k]).abs() < 1e-6);
            }
        }
        assert!(checked > 10);
    }
}
