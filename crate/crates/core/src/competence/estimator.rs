use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::buffer::{EstimatorSample, SampleBuffer};
use super::CompetenceConfig;
use crate::craftworld::VisualObs;
use crate::goalspace::SkillId;
use crate::nn::{sigmoid, Activation, Adam, Mlp};

/// Feature layout: flattened tile window and inventory, then a one-hot skill id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorNet {
    pub mlp: Mlp,
    pub n_skills: usize,
    pub view: usize,
}

impl EstimatorNet {
    pub fn new(hidden: &[usize], n_skills: usize, view: usize) -> Self {
        let mut dims = vec![VisualObs::flat_dim(view) + n_skills];
        dims.extend(hidden);
        dims.push(1);
        Self { mlp: Mlp::new(dims, Activation::Silu, Activation::Identity), n_skills, view }
    }

    pub fn features(&self, obs: &VisualObs, skill: SkillId) -> Vec<f64> {
        let mut x = vec![0.0; self.mlp.input_dim()];
        let flat = VisualObs::flat_dim(self.view);
        obs.write_flat(&mut x[..flat]);
        x[flat + skill] = 1.0;
        x
    }

    pub fn predict(&self, params: &[f64], obs: &VisualObs, skill: SkillId) -> f64 {
        sigmoid(self.mlp.predict(params, &self.features(obs, skill))[0])
    }
}

/// Mean binary cross-entropy over `(features, outcome)` pairs and its gradient.
pub fn bce_loss_and_grad(mlp: &Mlp, params: &[f64], batch: &[(Vec<f64>, bool)]) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; params.len()];
    let mut loss = 0.0;
    let n = batch.len() as f64;
    for (x, y) in batch {
        let trace = mlp.forward(params, x);
        let z = trace.output[0];
        let y = if *y { 1.0 } else { 0.0 };
        // log(1 + e^z) - y z, written to stay finite for large |z|
        loss += (z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z) / n;
        mlp.backward(params, &trace, &[(sigmoid(z) - y) / n], &mut grad, false);
    }
    (loss, grad)
}

/// Published, immutable estimator parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSnapshot {
    pub version: u64,
    pub params: Arc<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorStats {
    pub version: u64,
    pub samples: usize,
    pub loss: f64,
    pub mean_outcome: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompetenceEstimator {
    pub cfg: CompetenceConfig,
    pub net: EstimatorNet,
    params: Arc<Vec<f64>>,
    adam: Adam,
    buffer: SampleBuffer,
    /// Skills that always succeed and bypass the network.
    elementary: Vec<bool>,
    version: u64,
    rng: ChaCha8Rng,
}

impl CompetenceEstimator {
    pub fn new(cfg: CompetenceConfig, elementary: Vec<bool>, view: usize, seed: u64) -> Self {
        let net = EstimatorNet::new(&cfg.hidden, elementary.len(), view);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = net.mlp.init(&mut rng, 0.1);
        let adam = Adam::new(params.len(), cfg.lr);
        let buffer = SampleBuffer::new(cfg.retention_cycles);
        Self { cfg, net, params: Arc::new(params), adam, buffer, elementary, version: 0, rng }
    }

    pub fn estimate(&self, obs: &VisualObs, skill: SkillId) -> f64 {
        self.estimate_with(&self.params, obs, skill)
    }

    pub fn estimate_with(&self, params: &[f64], obs: &VisualObs, skill: SkillId) -> f64 {
        if self.elementary[skill] {
            1.0
        } else {
            self.net.predict(params, obs, skill)
        }
    }

    pub fn snapshot(&self) -> EstimatorSnapshot {
        EstimatorSnapshot { version: self.version, params: Arc::clone(&self.params) }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn buffer(&self) -> &SampleBuffer {
        &self.buffer
    }

    /// Stores the first `samples_per_execution` states of an execution, all
    /// labelled with its outcome. Elementary skills are not recorded.
    pub fn record_execution(&mut self, states: &[VisualObs], skill: SkillId, outcome: bool) -> usize {
        if self.elementary[skill] {
            return 0;
        }
        let n = states.len().min(self.cfg.samples_per_execution);
        for obs in &states[..n] {
            self.buffer.push(EstimatorSample { obs: obs.clone(), skill, outcome });
        }
        n
    }

    pub fn record(&mut self, sample: EstimatorSample) {
        self.buffer.push(sample);
    }

    pub fn end_cycle(&mut self) {
        self.buffer.end_cycle();
    }

    pub fn train_if_due(&mut self) -> Option<EstimatorStats> {
        (self.buffer.new_since_update() >= self.cfg.train_every).then(|| self.train())
    }

    /// Minimizes BCE over the buffer for the configured epochs and publishes a new version.
    pub fn train(&mut self) -> EstimatorStats {
        let mut order: Vec<&EstimatorSample> = self.buffer.iter().collect();
        let mut params = self.params.as_ref().clone();
        let mut loss_sum = 0.0;
        let mut batches = 0usize;
        for _ in 0..self.cfg.epochs {
            order.shuffle(&mut self.rng);
            let take = self.cfg.max_samples_per_pass.map_or(order.len(), |m| m.min(order.len()));
            for chunk in order[..take].chunks(self.cfg.batch_size.max(1)) {
                let batch: Vec<(Vec<f64>, bool)> = chunk.iter().map(|s| (self.net.features(&s.obs, s.skill), s.outcome)).collect();
                let (loss, grad) = bce_loss_and_grad(&self.net.mlp, &params, &batch);
                self.adam.step(&mut params, &grad);
                loss_sum += loss;
                batches += 1;
            }
        }
        let mean_outcome = order.iter().filter(|s| s.outcome).count() as f64 / order.len().max(1) as f64;
        let samples = order.len();
        self.params = Arc::new(params);
        self.version += 1;
        self.buffer.mark_consumed();
        EstimatorStats { version: self.version, samples, loss: loss_sum / batches.max(1) as f64, mean_outcome }
    }

    /// Trains until `steps` minibatch updates have run; used by tests and examples.
    pub fn train_steps(&mut self, steps: usize) {
        let samples: Vec<EstimatorSample> = self.buffer.iter().cloned().collect();
        let mut params = self.params.as_ref().clone();
        for _ in 0..steps {
            let batch: Vec<(Vec<f64>, bool)> = (0..self.cfg.batch_size.min(samples.len()))
                .map(|_| {
                    let s = &samples[self.rng.gen_range(0..samples.len())];
                    (self.net.features(&s.obs, s.skill), s.outcome)
                })
                .collect();
            let (_, grad) = bce_loss_and_grad(&self.net.mlp, &params, &batch);
            self.adam.step(&mut params, &grad);
        }
        self.params = Arc::new(params);
        self.version += 1;
        self.buffer.mark_consumed();
    }
}
