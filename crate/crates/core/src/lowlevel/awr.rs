use super::policy::LlNet;
use crate::nn::masked_log_softmax;

/// One training example: encoded observation, stored action, target return.
#[derive(Clone, Debug)]
pub struct AwrSample {
    pub x: Vec<f64>,
    pub action: usize,
    pub ret: f64,
}

/// `exp(A / beta)` clipped above at `w_max`.
pub fn awr_weight(advantage: f64, beta: f64, w_max: f64) -> f64 {
    (advantage / beta).exp().min(w_max)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AwrLoss {
    pub actor: f64,
    pub critic: f64,
    pub mean_weight: f64,
}

/// Batch-mean AWR loss `-w log pi(a|s) + c (V(s) - R)^2` and its gradient.
/// Weights are treated as constants; when `weights` is `None` they are
/// computed from the current critic.
pub fn awr_loss_and_grad(
    net: &LlNet,
    params: &[f64],
    batch: &[AwrSample],
    weights: Option<&[f64]>,
    beta: f64,
    w_max: f64,
    critic_coef: f64,
) -> (AwrLoss, Vec<f64>) {
    let mut grad = vec![0.0; params.len()];
    let mut loss = AwrLoss::default();
    let n = batch.len() as f64;
    for (k, s) in batch.iter().enumerate() {
        let trace = net.forward(params, &s.x);
        let logp = masked_log_softmax(trace.logits(), None);
        let v = trace.value();
        let w = weights.map_or_else(|| awr_weight(s.ret - v, beta, w_max), |w| w[k]);
        loss.actor -= w * logp[s.action] / n;
        loss.critic += critic_coef * (v - s.ret).powi(2) / n;
        loss.mean_weight += w / n;
        let mut d = vec![0.0; logp.len() + 1];
        for (j, lp) in logp.iter().enumerate() {
            let target = if j == s.action { 1.0 } else { 0.0 };
            d[j] = -w * (target - lp.exp()) / n;
        }
        d[logp.len()] = 2.0 * critic_coef * (v - s.ret) * v * (1.0 - v) / n;
        net.backward(params, &trace, &d, &mut grad);
    }
    (loss, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{generate_world, VisualObs, DEFAULT_VIEW};
    use crate::nn::EncoderSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weights_are_positive_and_capped() {
        assert_eq!(awr_weight(0.0, 1.0, 20.0), 1.0);
        assert_eq!(awr_weight(10.0, 1.0, 20.0), 20.0);
        assert!(awr_weight(-50.0, 1.0, 20.0) > 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let net = LlNet::new(&EncoderSpec::Mlp { hidden: vec![3] }, DEFAULT_VIEW);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut params = net.init(&mut rng);
        // larger head weights so the loss is not flat
        let n = params.len();
        for p in params[n - 68..].iter_mut() {
            *p *= 100.0;
        }
        let batch: Vec<AwrSample> = (0..4)
            .map(|i| AwrSample {
                x: VisualObs::from_state(&generate_world(i, 9).unwrap(), DEFAULT_VIEW).flat_features(),
                action: (i * 5 % 16) as usize,
                ret: 0.3 * i as f64 / 4.0,
            })
            .collect();
        let weights = [0.5, 1.0, 2.0, 3.0];
        let loss = |p: &[f64]| {
            let (l, _) = awr_loss_and_grad(&net, p, &batch, Some(&weights), 1.0, 20.0, 0.5);
            l.actor + l.critic
        };
        let (_, grad) = awr_loss_and_grad(&net, &params, &batch, Some(&weights), 1.0, 20.0, 0.5);
        let h = 1e-6;
        for i in (0..n).step_by(97).chain(n - 68..n) {
            let mut p = params.clone();
            p[i] += h;
            let up = loss(&p);
            p[i] -= 2.0 * h;
            let down = loss(&p);
            let fd = (up - down) / (2.0 * h);
            let err = (fd - grad[i]).abs() / fd.abs().max(grad[i].abs()).max(1e-8);
            assert!(err < 1e-4 || (fd - grad[i]).abs() < 1e-9, "param {i}: fd {fd} vs {}", grad[i]);
        }
    }
}
