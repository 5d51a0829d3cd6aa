use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::attempt::{Agent, Attempt, GoalSpec, HlStep, Modes};
use crate::competence::CompetenceEstimator;
use crate::craftworld::{generate_world_with, VisualObs, WorldState};
use crate::evaluation::{self, EvalReport};
use crate::goalspace::{GoalCatalog, Lexicon, SkillVocabulary};
use crate::highlevel::{context_dim, HighLevelNet, HighLevelPolicy, HlTransition};
use crate::lowlevel::LowLevelBank;
use crate::persist::{AttemptRecord, Counters, MetricsRecord, MetricsSink, RunConfig, SamplerRecord, SkillSpaceRecord};
use crate::sampler::GoalSampler;
use crate::skillspace::UpdateFrequencyTracker;
use crate::Result;

/// Independent sub-seed for component `tag`, instance `index`.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    let mut h = master ^ 0x6A09_E667_F3BC_C908;
    for b in tag.bytes().chain(index.to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3);
        h ^= h >> 29;
    }
    h
}

/// One parallel environment with its own random stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvSlot {
    pub world: WorldState,
    pub rng: ChaCha8Rng,
    pub attempt: Option<Attempt>,
    /// Whether the current goal came from the sampler's exploration branch.
    pub explored: bool,
}

struct EnvOutcome {
    step: HlStep,
    finished: Option<(Attempt, bool)>,
    new_episode: bool,
    episode_hl_steps: u32,
}

/// Per-cycle skill-space statistics.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct CycleStats {
    decisions: u64,
    admissible: u64,
    included: Vec<u64>,
    drawn: Vec<u64>,
}

/// Full training state: models, buffers, environments and random streams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trainer {
    pub cfg: RunConfig,
    pub catalog: GoalCatalog,
    pub lexicon: Lexicon,
    pub vocab: SkillVocabulary,
    pub hl: HighLevelPolicy,
    pub ll: LowLevelBank,
    pub competence: CompetenceEstimator,
    pub tracker: UpdateFrequencyTracker,
    pub sampler: GoalSampler,
    pub envs: Vec<EnvSlot>,
    pub counters: Counters,
    streams: Vec<Vec<HlTransition>>,
    batch_len: usize,
    rng: ChaCha8Rng,
    stats: CycleStats,
}

/// Builds the goal catalog a configuration trains on.
pub fn catalog_for(cfg: &RunConfig) -> Result<GoalCatalog> {
    let base = match &cfg.goals.catalog_file {
        Some(path) => GoalCatalog::from_toml(&std::fs::read_to_string(path)?)?,
        None => GoalCatalog::default(),
    };
    match &cfg.goals.subset {
        Some(subset) => base.restrict(subset),
        None => Ok(base),
    }
}

impl Trainer {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let catalog = catalog_for(&cfg)?;
        let lexicon = Lexicon::default();
        let vocab = SkillVocabulary::for_catalog(&catalog, &lexicon);
        let seed = cfg.seed;
        let view = cfg.world.view;
        let n = catalog.len();
        let net = HighLevelNet::new(context_dim(vocab.len()), vocab.len(), cfg.hl.context_width, cfg.hl.token_hidden, &cfg.hl.value_hidden);
        let hl = HighLevelPolicy::new(net, cfg.hl.ppo.lr, &mut ChaCha8Rng::seed_from_u64(derive_seed(seed, "hl", 0)));
        let skills: Vec<usize> = catalog.achievements().map(|(i, _)| i).collect();
        let ll = LowLevelBank::new(cfg.ll.clone(), view, skills, derive_seed(seed, "ll", 0));
        let elementary = catalog.goals().iter().map(|g| g.is_elementary()).collect();
        let competence = CompetenceEstimator::new(cfg.competence.clone(), elementary, view, derive_seed(seed, "competence", 0));
        let tracker = UpdateFrequencyTracker::new(n, cfg.skillspace.window);
        let sampler = GoalSampler::new(cfg.sampler.clone(), n, view, derive_seed(seed, "sampler", 0));
        let envs = (0..cfg.budgets.envs)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "env", i as u64));
                let world = generate_world_with(rng.gen::<u32>() as u64, cfg.world.side, &cfg.world.generator)?;
                Ok(EnvSlot { world, rng, attempt: None, explored: false })
            })
            .collect::<Result<Vec<_>>>()?;
        let streams = vec![Vec::new(); envs.len()];
        let stats = CycleStats { included: vec![0; n], drawn: vec![0; n], ..Default::default() };
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, "coordinator", 0)),
            cfg,
            catalog,
            lexicon,
            vocab,
            hl,
            ll,
            competence,
            tracker,
            sampler,
            envs,
            counters: Counters::default(),
            streams,
            batch_len: 0,
            stats,
        })
    }

    /// Restores lookup tables skipped by serialization.
    pub fn reindex(&mut self) {
        self.catalog.reindex();
        self.vocab.reindex();
    }

    pub fn agent(&self) -> Agent<'_> {
        Agent {
            catalog: &self.catalog,
            vocab: &self.vocab,
            hl: &self.hl,
            ll: &self.ll,
            competence: &self.competence,
            tracker: &self.tracker,
            budgets: &self.cfg.budgets,
            view: self.cfg.world.view,
            flat: self.cfg.flat_baseline,
        }
    }

    /// True once the environment-step budget or the cycle limit is reached.
    pub fn finished(&self) -> bool {
        let b = &self.cfg.budgets;
        self.counters.env_steps >= b.max_env_steps || b.max_cycles.is_some_and(|m| self.counters.cycles >= m)
    }

    /// Trains until the budget is spent.
    pub fn train(&mut self, sink: &mut dyn MetricsSink) -> Result<()> {
        while !self.finished() {
            self.train_cycle(sink)?;
        }
        Ok(())
    }

    /// Collects and learns until the current cycle ends or the budget is spent.
    pub fn train_cycle(&mut self, sink: &mut dyn MetricsSink) -> Result<()> {
        let cycle = self.counters.cycles;
        while self.counters.cycles == cycle && !self.finished() {
            self.round(sink)?;
        }
        Ok(())
    }

    /// One high-level step in every environment, then the due updates.
    pub fn round(&mut self, sink: &mut dyn MetricsSink) -> Result<()> {
        let outcomes = {
            let agent = Agent {
                catalog: &self.catalog,
                vocab: &self.vocab,
                hl: &self.hl,
                ll: &self.ll,
                competence: &self.competence,
                tracker: &self.tracker,
                budgets: &self.cfg.budgets,
                view: self.cfg.world.view,
                flat: self.cfg.flat_baseline,
            };
            let sampler = &self.sampler;
            let world_cfg = &self.cfg.world;
            self.envs
                .par_iter_mut()
                .map(|env| advance(env, &agent, sampler, world_cfg))
                .collect::<Result<Vec<_>>>()?
        };
        for (i, out) in outcomes.into_iter().enumerate() {
            self.ingest(i, out, sink)?;
        }
        self.run_due_updates(sink)?;
        if self.batch_len >= self.cfg.budgets.cycle_size {
            self.end_cycle(sink)?;
        }
        Ok(())
    }

    fn ingest(&mut self, env: usize, out: EnvOutcome, sink: &mut dyn MetricsSink) -> Result<()> {
        self.counters.hl_steps += 1;
        self.counters.env_steps += out.step.env_steps as u64;
        if out.new_episode {
            self.counters.episodes += 1;
        }
        self.stats.decisions += 1;
        self.stats.admissible += out.step.admissible.skills.len() as u64;
        for d in &out.step.admissible.draws {
            self.stats.drawn[d.skill] += 1;
            self.stats.included[d.skill] += d.included as u64;
        }
        self.streams[env].push(out.step.transition);
        self.batch_len += 1;
        let Some((attempt, explored)) = out.finished else {
            return Ok(());
        };
        let goal = attempt.goal.skill.expect("training goals come from the catalog");
        if !self.cfg.flat_baseline {
            self.ll.relabel_and_store(&attempt.segments, goal, &attempt.goal_rewards);
            for seg in attempt.segments.iter().filter(|s| !s.elementary) {
                self.competence.record_execution(&seg.obs, seg.skill, seg.success);
            }
        }
        self.sampler.record_outcome(&attempt.hl_obs, goal, attempt.success);
        self.counters.attempts += 1;
        let record = AttemptRecord {
            env,
            goal: attempt.goal.text.clone(),
            success: attempt.success,
            hl_steps: attempt.hl_steps,
            env_steps: attempt.env_steps(),
            max_skill_steps: attempt.max_segment_len(),
            episode_hl_steps: out.episode_hl_steps,
            skills: attempt.skill_calls().map(|s| self.catalog.get(s).text.clone()).collect(),
            explored,
        };
        sink.emit(MetricsRecord::Attempt { at: self.counters, record })
    }

    fn run_due_updates(&mut self, sink: &mut dyn MetricsSink) -> Result<()> {
        if !self.cfg.flat_baseline {
            for skill in self.ll.due() {
                if let Some(stats) = self.ll.awr_update(skill) {
                    self.tracker.record_update(skill);
                    let skill_text = self.catalog.get(skill).text.clone();
                    sink.emit(MetricsRecord::LlTrain { at: self.counters, skill_text, stats })?;
                }
            }
            if let Some(stats) = self.competence.train_if_due() {
                sink.emit(MetricsRecord::Estimator { at: self.counters, stats })?;
            }
        }
        if let Some(stats) = self.sampler.update_if_due() {
            let record = SamplerRecord { epsilon: self.sampler.epsilon(), entries: self.sampler.entries(), ring_versions: self.sampler.ring().versions(), stats };
            sink.emit(MetricsRecord::Sampler { at: self.counters, record })?;
        }
        Ok(())
    }

    fn end_cycle(&mut self, sink: &mut dyn MetricsSink) -> Result<()> {
        let agent = self.agent();
        let bootstrap: Vec<f64> = self
            .envs
            .iter()
            .zip(&self.streams)
            .map(|(env, stream)| match (&env.attempt, stream.last()) {
                (Some(a), Some(t)) if !t.done => agent.value(&env.world, a),
                _ => 0.0,
            })
            .collect();
        let stats = self.hl.ppo_update(&self.streams, &bootstrap, &self.cfg.hl.ppo, &mut self.rng);
        sink.emit(MetricsRecord::HlTrain { at: self.counters, stats })?;
        self.streams.iter_mut().for_each(Vec::clear);
        self.batch_len = 0;

        let named = |i: usize| self.catalog.get(i).text.clone();
        let record = SkillSpaceRecord {
            cycle: self.counters.cycles,
            mean_admissible: self.stats.admissible as f64 / self.stats.decisions.max(1) as f64,
            inclusion: (0..self.catalog.len())
                .filter(|&i| self.stats.drawn[i] > 0)
                .map(|i| (named(i), self.stats.included[i] as f64 / self.stats.drawn[i] as f64))
                .collect(),
            update_counts: self.catalog.achievements().map(|(i, g)| (g.text.clone(), self.tracker.count(i))).collect(),
        };
        sink.emit(MetricsRecord::Skillspace { at: self.counters, record })?;
        let n = self.catalog.len();
        self.stats = CycleStats { included: vec![0; n], drawn: vec![0; n], ..Default::default() };

        self.tracker.end_cycle();
        self.competence.end_cycle();
        self.sampler.end_cycle();
        self.counters.cycles += 1;
        let every = self.cfg.eval.every_cycles;
        if every > 0 && self.counters.cycles % every == 0 {
            let report = self.evaluate()?;
            sink.emit(MetricsRecord::Eval { at: self.counters, report })?;
        }
        Ok(())
    }

    /// Goals evaluated by default: the configured list, else every trained achievement.
    pub fn eval_goals(&self) -> Vec<String> {
        match &self.cfg.eval.goals {
            Some(g) => g.clone(),
            None => self.catalog.achievements().map(|(_, g)| g.text.clone()).collect(),
        }
    }

    pub fn eval_modes(&self) -> Modes {
        Modes { hl: self.cfg.eval.hl_mode, ll: self.cfg.eval.ll_mode, with_reference: false }
    }

    /// Canonical-goal evaluation on the held-out seeds.
    pub fn evaluate(&self) -> Result<EvalReport> {
        let goals = evaluation::canonical_suite(&self.catalog, &self.vocab, &self.eval_goals())?;
        let seeds = evaluation::held_out_seeds(self.cfg.eval.seed_base, self.cfg.eval.seeds);
        evaluation::evaluate(&self.agent(), &self.cfg.world, &goals, &seeds, self.eval_modes(), "canonical")
    }
}

fn advance(env: &mut EnvSlot, agent: &Agent<'_>, sampler: &GoalSampler, world_cfg: &crate::persist::WorldConfig) -> Result<EnvOutcome> {
    let mut new_episode = false;
    if env.attempt.is_none() {
        if env.world.hl_step_count >= agent.budgets.episode_cap {
            env.world = generate_world_with(env.rng.gen::<u32>() as u64, world_cfg.side, &world_cfg.generator)?;
            new_episode = true;
        }
        let obs = VisualObs::from_state(&env.world, agent.view);
        let draw = sampler.sample_goal(&obs, agent.catalog, &mut env.rng)?;
        let spec = GoalSpec::from_goal(agent.catalog.get(draw.goal), agent.vocab, Some(draw.goal))?;
        env.attempt = Some(Attempt::new(spec));
        env.explored = draw.explored;
    }
    let attempt = env.attempt.as_mut().expect("attempt was just started");
    let step = agent.hl_step(&mut env.world, attempt, Modes::TRAIN, &mut env.rng)?;
    let finished = if attempt.done { env.attempt.take().map(|a| (a, env.explored)) } else { None };
    Ok(EnvOutcome { step, finished, new_episode, episode_hl_steps: env.world.hl_step_count })
}
