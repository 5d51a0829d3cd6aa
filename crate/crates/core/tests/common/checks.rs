//! The fast acceptance checks, shared by the integration tests and the
//! `acceptance` target. Each returns a verdict with a one-line detail.

use std::time::Instant;

use autotelic::competence::{bce_loss_and_grad, EstimatorNet};
use autotelic::craftworld::{difficulty, generate_world, step, Achievement, ElementaryAction, VerifierId, VisualObs, DEFAULT_VIEW};
use autotelic::evaluation::{crafter_score, held_out_seeds, synonym_score};
use autotelic::goalspace::{GoalCatalog, Lexicon, SkillVocabulary};
use autotelic::highlevel::{ppo_loss_and_grad, HighLevelNet, HlTransition, PpoConfig, PpoSample, SkillTrie};
use autotelic::lowlevel::{awr_loss_and_grad, ActMode, AwrSample, LlNet};
use autotelic::nn::EncoderSpec;
use autotelic::skillspace::{self, UpdateFrequencyTracker};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Difficulty scores as printed in the published table.
pub const DIFFICULTY_TABLE: [(Achievement, f64); 11] = [
    (Achievement::GoToTree, 0.5),
    (Achievement::GoToStone, 0.5),
    (Achievement::GoToCoal, 0.5),
    (Achievement::CollectWood, 0.5),
    (Achievement::PlaceTable, 2.5),
    (Achievement::GoToTable, 2.5),
    (Achievement::MakeWoodPickaxe, 4.0),
    (Achievement::CollectStone, 5.0),
    (Achievement::CollectCoal, 5.0),
    (Achievement::PlaceFurnace, 8.5),
    (Achievement::GoToFurnace, 8.5),
];

pub fn difficulty_table() -> Verdict {
    let start = Instant::now();
    let wrong: Vec<String> = DIFFICULTY_TABLE
        .iter()
        .filter(|(a, d)| difficulty(*a).map(|x| x.as_f64()) != Some(*d))
        .map(|(a, _)| a.text())
        .collect();
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(wrong.is_empty() && secs < 1.0, format!("11 rows, mismatches {wrong:?}, {secs:.3}s (< 1s)"))
}

pub fn score_formulas() -> Verdict {
    let closed = |srs: &[f64]| (srs.iter().map(|s| (1.0 + s).ln()).sum::<f64>() / srs.len() as f64).exp() - 1.0;
    let mut one_hundred = vec![0.0; 10];
    one_hundred[3] = 100.0;
    let vectors: Vec<Vec<f64>> = vec![vec![0.0; 10], vec![100.0; 10], one_hundred.clone(), vec![12.5, 40.0, 0.0, 77.0, 100.0]];
    let mut worst: f64 = 0.0;
    for v in &vectors {
        worst = worst.max((crafter_score(v).unwrap() - closed(v)).abs());
    }
    let single = crafter_score(&one_hundred).unwrap();
    worst = worst.max((single - (101f64.powf(0.1) - 1.0)).abs());
    let groups = vec![vec![0.0, 100.0], vec![50.0], vec![10.0, 20.0, 30.0]];
    let syn = synonym_score(&groups).unwrap();
    let by_hand = ((101f64.ln() / 2.0 + 51f64.ln() + (11f64.ln() + 21f64.ln() + 31f64.ln()) / 3.0) / 3.0).exp() - 1.0;
    worst = worst.max((syn - by_hand).abs());
    let singletons: Vec<Vec<f64>> = one_hundred.iter().map(|&s| vec![s]).collect();
    worst = worst.max((synonym_score(&singletons).unwrap() - single).abs());
    worst = worst.max(synonym_score(&[vec![0.0; 3], vec![0.0]]).unwrap().abs());
    worst = worst.max((synonym_score(&[vec![100.0; 3], vec![100.0]]).unwrap() - 100.0).abs());
    Verdict::new(worst < 1e-9, format!("N=10 single-100 score {single:.6}, max deviation {worst:.2e} (< 1e-9)"))
}

pub fn verifier_oracle() -> Verdict {
    let start = Instant::now();
    let result = super::oracle_rollouts(1000, 200, 7);
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(events) => Verdict::new(secs < 60.0, format!("1000 x 200-step rollouts on 7x7 agree, {events} achievement events, {secs:.1}s (< 60s)")),
        Err(e) => Verdict::new(false, format!("disagreement: {e}")),
    }
}

fn decoding_setup() -> (GoalCatalog, SkillVocabulary, HighLevelNet) {
    let catalog = GoalCatalog::default();
    let vocab = SkillVocabulary::for_catalog(&catalog, &Lexicon::default());
    let net = HighLevelNet::new(12, vocab.len(), 16, 12, &[8]);
    (catalog, vocab, net)
}

/// Random admissible set: every elementary skill plus each other goal with a
/// random inclusion probability.
fn random_admissible(catalog: &GoalCatalog, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let tracker = UpdateFrequencyTracker::new(catalog.len(), 5);
    let probs: Vec<f64> = (0..catalog.len()).map(|_| rng.gen()).collect();
    skillspace::build(catalog, |i| probs[i], &tracker, rng).skills
}

pub fn constrained_decoding() -> Verdict {
    let start = Instant::now();
    let (catalog, vocab, net) = decoding_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    let mut worst_sum: f64 = 0.0;
    let mut params = net.init(&mut rng);
    params.iter_mut().for_each(|p| *p *= 4.0);
    for k in 0..10_000 {
        let set = random_admissible(&catalog, &mut rng);
        let trie = SkillTrie::new(&vocab, set.iter().map(|&i| (i, catalog.get(i).text.as_str()))).unwrap();
        let x: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mode = if k % 10 == 0 { ActMode::Greedy } else { ActMode::Sample };
        let d = net.decode(&params, None, &x, &trie, mode, &mut rng);
        if !set.contains(&d.skill) || vocab.detokenize(&d.tokens) != catalog.get(d.skill).text {
            bad += 1;
        }
        if k % 50 == 0 {
            let total: f64 = trie.paths().iter().map(|(_, t)| net.path_log_prob(&params, &x, &trie, t).exp()).sum();
            worst_sum = worst_sum.max((total - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        bad == 0 && worst_sum < 1e-6 && secs < 60.0,
        format!("10^4 decodes, {bad} inadmissible; max |sum path prob - 1| {worst_sum:.1e} (< 1e-6); {secs:.1}s (< 60s)"),
    )
}

/// Largest relative error between `grad` and central differences of `loss`
/// over the given coordinates. Coordinates where both sides are below 1e-8
/// carry no signal and are skipped.
pub fn max_relative_error(params: &[f64], grad: &[f64], coords: impl IntoIterator<Item = usize>, loss: impl Fn(&[f64]) -> f64) -> (f64, usize) {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut p = params.to_vec();
    for i in coords {
        p[i] = params[i] + h;
        let up = loss(&p);
        p[i] = params[i] - h;
        let down = loss(&p);
        p[i] = params[i];
        let fd = (up - down) / (2.0 * h);
        let scale = fd.abs().max(grad[i].abs());
        if scale < 1e-8 {
            continue;
        }
        worst = worst.max((fd - grad[i]).abs() / scale);
        checked += 1;
    }
    (worst, checked)
}

fn probe_obs(i: u64) -> VisualObs {
    VisualObs::from_state(&generate_world(i, 9).unwrap(), DEFAULT_VIEW)
}

pub fn bce_gradient() -> (f64, usize) {
    let net = EstimatorNet::new(&[6, 4], 4, DEFAULT_VIEW);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = net.mlp.init(&mut rng, 1.0);
    let batch: Vec<(Vec<f64>, bool)> = (0..6).map(|i| (net.features(&probe_obs(i), (i % 4) as usize), i % 3 == 0)).collect();
    let (_, grad) = bce_loss_and_grad(&net.mlp, &params, &batch);
    let n = params.len();
    max_relative_error(&params, &grad, (0..n).step_by(7), |p| bce_loss_and_grad(&net.mlp, p, &batch).0)
}

pub fn awr_gradient(spec: EncoderSpec) -> (f64, usize) {
    let net = LlNet::new(&spec, DEFAULT_VIEW);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut params = net.init(&mut rng);
    let n = params.len();
    params[n - 200..].iter_mut().for_each(|p| *p *= 50.0);
    let batch: Vec<AwrSample> = (0..4)
        .map(|i| AwrSample { x: net.features(&probe_obs(i + 10)), action: (i * 5 % 16) as usize, ret: 0.2 * i as f64 })
        .collect();
    let weights = [0.5, 1.0, 2.0, 3.0];
    let loss = |p: &[f64]| {
        let (l, _) = awr_loss_and_grad(&net, p, &batch, Some(&weights), 1.0, 20.0, 0.5);
        l.actor + l.critic
    };
    let (_, grad) = awr_loss_and_grad(&net, &params, &batch, Some(&weights), 1.0, 20.0, 0.5);
    max_relative_error(&params, &grad, (0..n).step_by(n / 300 + 1).chain(n - 100..n), loss)
}

pub fn ppo_gradient() -> (f64, usize) {
    let (catalog, vocab, _) = decoding_setup();
    let net = HighLevelNet::new(6, vocab.len(), 5, 4, &[3, 3]);
    let trie = SkillTrie::new(&vocab, catalog.goals().iter().enumerate().map(|(i, g)| (i, g.text.as_str()))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // zero biases put ReLU units exactly on their kink, so jitter every weight
    let mut params = net.init(&mut rng);
    params.iter_mut().for_each(|p| *p = *p * 3.0 + rng.gen_range(-0.2..0.2));
    let reference: Vec<f64> = params.iter().map(|p| p * 0.9).collect();
    let transitions: Vec<HlTransition> = (0..6)
        .map(|i| {
            let x: Vec<f64> = (0..6).map(|j| ((i * 7 + j * 3) % 5) as f64 / 4.0).collect();
            let mut decoded = net.decode(&params, Some(&reference), &x, &trie, ActMode::Sample, &mut rng);
            decoded.logps.iter_mut().for_each(|l| *l += 0.05);
            HlTransition { features: x, decoded, reward: (i % 2) as f64, done: i % 3 == 2, value: 0.4 }
        })
        .collect();
    let batch: Vec<PpoSample> = transitions
        .iter()
        .enumerate()
        .map(|(i, t)| PpoSample { transition: t, advantage: i as f64 * 0.3 - 0.7, ret: 0.25 * (i % 4) as f64 })
        .collect();
    // a wide clip keeps the surrogate differentiable at the probe point
    let cfg = PpoConfig { clip: 10.0, ..Default::default() };
    let (_, grad) = ppo_loss_and_grad(&net, &params, &batch, &cfg);
    max_relative_error(&params, &grad, 0..params.len(), |p| ppo_loss_and_grad(&net, p, &batch, &cfg).0.total(&cfg))
}

pub fn gradient_checks() -> Verdict {
    let probes = [
        ("bce", bce_gradient()),
        ("awr-mlp", awr_gradient(EncoderSpec::Mlp { hidden: vec![5] })),
        ("awr-resnet", awr_gradient(EncoderSpec::ResNet { channels: vec![2, 2], hidden: vec![4] })),
        ("ppo", ppo_gradient()),
    ];
    let pass = probes.iter().all(|(_, (err, n))| *err < 1e-4 && *n > 20);
    let detail: Vec<String> = probes.iter().map(|(name, (err, n))| format!("{name} {err:.1e} over {n}")).collect();
    Verdict::new(pass, format!("max relative error (< 1e-4): {}", detail.join(", ")))
}

/// Empirical inclusion frequency of every non-elementary goal against
/// `max(estimate, epsilon)`; returns the largest deviation.
pub fn inclusion_deviation(estimate: f64, recent_update: bool, draws: usize, seed: u64) -> f64 {
    let catalog = GoalCatalog::default();
    let mut tracker = UpdateFrequencyTracker::new(catalog.len(), 5);
    if recent_update {
        for (i, _) in catalog.achievements() {
            tracker.record_update(i);
        }
    }
    let expected = estimate.max(if recent_update { 0.1 } else { 0.0 });
    let mut counts = vec![0usize; catalog.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        for s in skillspace::build(&catalog, |_| estimate, &tracker, &mut rng).skills {
            counts[s] += 1;
        }
    }
    catalog.achievements().map(|(i, _)| (counts[i] as f64 / draws as f64 - expected).abs()).fold(0.0, f64::max)
}

pub fn inclusion_fidelity() -> Verdict {
    let mut worst: f64 = 0.0;
    for (k, est) in [0.0, 0.3, 0.9].into_iter().enumerate() {
        for (j, eps) in [false, true].into_iter().enumerate() {
            worst = worst.max(inclusion_deviation(est, eps, 10_000, (k * 2 + j) as u64));
        }
    }
    Verdict::new(worst <= 0.02, format!("10^4 draws per cell, estimate {{0, 0.3, 0.9}} x epsilon {{0, 0.1}}, max deviation {worst:.4} (<= 0.02)"))
}

/// Success rate of a uniform-random policy on "go to tree" within 128 steps.
pub fn random_go_to_tree(worlds: usize) -> f64 {
    let target = VerifierId::Achievement(Achievement::GoToTree);
    let mut hits = 0;
    for seed in held_out_seeds(1 << 40, worlds) {
        let mut w = generate_world(seed, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if (0..128).any(|_| step(&mut w, ElementaryAction::ALL[rng.gen_range(0..ElementaryAction::COUNT)]).contains(&target)) {
            hits += 1;
        }
    }
    hits as f64 / worlds as f64
}

pub fn random_agent_anchor() -> Verdict {
    let start = Instant::now();
    let sr = random_go_to_tree(400);
    let secs = start.elapsed().as_secs_f64();
    Verdict::new((sr - 0.9).abs() <= 0.1 && secs < 120.0, format!("go-to-tree SR {sr:.3} on 400 held-out 32x32 worlds (0.9 +- 0.1), {secs:.1}s (< 120s)"))
}
