use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::competence::CompetenceConfig;
use crate::craftworld::{WorldGenConfig, MIN_SIDE};
use crate::highlevel::PpoConfig;
use crate::lowlevel::{ActMode, LowLevelConfig};
use crate::nn::EncoderSpec;
use crate::sampler::SamplerConfig;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorldConfig {
    pub side: usize,
    pub view: usize,
    pub generator: WorldGenConfig,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self { side: 32, view: 9, generator: WorldGenConfig::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GoalsConfig {
    /// Achievement texts to train on; all catalog achievements when unset.
    pub subset: Option<Vec<String>>,
    /// TOML goal catalog replacing the built-in one.
    pub catalog_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Skills per goal attempt.
    pub n_hl: u32,
    /// Environment steps per skill execution.
    pub n_ll: u32,
    /// High-level steps before an environment reset.
    pub episode_cap: u32,
    pub envs: usize,
    /// High-level transitions per collection cycle.
    pub cycle_size: usize,
    /// Training stops once this many environment steps were taken.
    pub max_env_steps: u64,
    pub max_cycles: Option<u64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { n_hl: 64, n_ll: 128, episode_cap: 155, envs: 48, cycle_size: 2496, max_env_steps: 10_000_000, max_cycles: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HighLevelConfig {
    pub context_width: usize,
    pub token_hidden: usize,
    pub value_hidden: Vec<usize>,
    pub ppo: PpoConfig,
}

impl Default for HighLevelConfig {
    fn default() -> Self {
        Self { context_width: 1024, token_hidden: 256, value_hidden: vec![1024, 1024], ppo: PpoConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalConfig {
    /// Evaluate every this many cycles; 0 disables periodic evaluation.
    pub every_cycles: u64,
    pub seeds: usize,
    /// First held-out world seed; training seeds are drawn below 2^32.
    pub seed_base: u64,
    /// Goals evaluated; all trained achievements when unset.
    pub goals: Option<Vec<String>>,
    pub hl_mode: ActMode,
    pub ll_mode: ActMode,
    /// Runs per synonym reformulation.
    pub synonym_runs: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            every_cycles: 1,
            seeds: 40,
            seed_base: 1 << 40,
            goals: None,
            hl_mode: ActMode::Greedy,
            ll_mode: ActMode::Greedy,
            synonym_runs: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SkillSpaceConfig {
    /// Cycles over which low-level updates are counted for the exploration floor.
    pub window: usize,
}

impl Default for SkillSpaceConfig {
    fn default() -> Self {
        Self { window: 5 }
    }
}

/// Every knob of a training run. Loading rejects unknown keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Restrict the high level to elementary actions and skip low-level training.
    pub flat_baseline: bool,
    /// Checkpoint every this many cycles; 0 writes only the final checkpoint.
    pub checkpoint_every: u64,
    pub world: WorldConfig,
    pub goals: GoalsConfig,
    pub budgets: Budgets,
    pub hl: HighLevelConfig,
    pub ll: LowLevelConfig,
    pub competence: CompetenceConfig,
    pub skillspace: SkillSpaceConfig,
    pub sampler: SamplerConfig,
    pub eval: EvalConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut ll = LowLevelConfig::default();
        ll.encoder = EncoderSpec::ResNet { channels: vec![64, 128, 128], hidden: vec![1024, 128] };
        Self {
            seed: 0,
            out_dir: PathBuf::from("runs/default"),
            flat_baseline: false,
            checkpoint_every: 0,
            world: WorldConfig::default(),
            goals: GoalsConfig::default(),
            budgets: Budgets::default(),
            hl: HighLevelConfig::default(),
            ll,
            competence: CompetenceConfig::default(),
            skillspace: SkillSpaceConfig::default(),
            sampler: SamplerConfig::default(),
            eval: EvalConfig::default(),
        }
    }
}

impl RunConfig {
    /// Paper hyperparameters with desk-sized networks and parallelism.
    pub fn desk() -> Self {
        let mut c = Self::default();
        c.budgets.envs = 8;
        c.ll.encoder = EncoderSpec::ResNet { channels: vec![16, 32, 32], hidden: vec![256, 64] };
        c.hl.context_width = 256;
        c.hl.token_hidden = 128;
        c.hl.value_hidden = vec![256, 256];
        c
    }

    /// Small 9x9 worlds with three goals, dense encoders and larger learning
    /// rates: the setting used for the learning-trend checks.
    pub fn trend() -> Self {
        let mut c = Self::desk();
        c.world.side = 9;
        c.goals.subset = Some(vec!["go to tree".into(), "collect wood".into(), "place table".into()]);
        c.budgets.max_env_steps = 200_000;
        c.budgets.cycle_size = 512;
        c.ll.encoder = EncoderSpec::Mlp { hidden: vec![256, 64] };
        c.ll.lr = 3e-3;
        c.ll.beta_awr = 0.3;
        c.ll.epochs = 5.0;
        c.ll.update_every = 1024;
        c.hl.ppo.lr = 3e-4;
        c.hl.ppo.minibatch = 128;
        c.competence.lr = 1e-3;
        c.competence.max_samples_per_pass = Some(2048);
        c.sampler.estimator.lr = 1e-3;
        c.sampler.horizon = 5_000;
        c.eval.seeds = 40;
        c.eval.every_cycles = 4;
        c.eval.ll_mode = ActMode::Sample;
        c.eval.goals = Some(vec!["place table".into()]);
        c
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |field: &str, why: &str| Err(Error::Config(format!("{field}: {why}")));
        let b = &self.budgets;
        // TOML integers are signed 64-bit
        for (name, v) in [("seed", self.seed), ("eval.seed_base", self.eval.seed_base), ("budgets.max_env_steps", b.max_env_steps)] {
            if v > i64::MAX as u64 {
                return fail(name, "must be below 2^63");
            }
        }
        if self.world.side < MIN_SIDE {
            return fail("world.side", &format!("must be at least {MIN_SIDE}"));
        }
        if self.world.view % 2 == 0 || self.world.view < 3 {
            return fail("world.view", "must be odd and at least 3");
        }
        for (name, v) in [("budgets.n_hl", b.n_hl as usize), ("budgets.n_ll", b.n_ll as usize), ("budgets.episode_cap", b.episode_cap as usize), ("budgets.envs", b.envs), ("budgets.cycle_size", b.cycle_size)] {
            if v == 0 {
                return fail(name, "must be positive");
            }
        }
        for (name, v) in [("hl.ppo.gamma", self.hl.ppo.gamma), ("hl.ppo.lambda", self.hl.ppo.lambda), ("ll.gamma", self.ll.gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return fail(name, "must be in [0, 1]");
            }
        }
        for (name, v) in [
            ("hl.ppo.lr", self.hl.ppo.lr),
            ("ll.lr", self.ll.lr),
            ("ll.beta_awr", self.ll.beta_awr),
            ("ll.w_max", self.ll.w_max),
            ("competence.lr", self.competence.lr),
            ("hl.ppo.clip", self.hl.ppo.clip),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(name, "must be positive");
            }
        }
        if !(0.0..=1.0).contains(&self.sampler.epsilon0) {
            return fail("sampler.epsilon0", "must be in [0, 1]");
        }
        if self.ll.buffer_capacity == 0 || self.ll.batch_size == 0 || self.ll.update_every == 0 {
            return fail("ll", "buffer_capacity, batch_size and update_every must be positive");
        }
        if self.competence.train_every == 0 || self.sampler.update_every == 0 {
            return fail("competence.train_every", "must be positive");
        }
        if self.eval.seeds == 0 {
            return fail("eval.seeds", "must be positive");
        }
        if self.eval.seed_base < 1 << 32 {
            return fail("eval.seed_base", "must be at least 2^32 so held-out seeds never meet training seeds");
        }
        Ok(())
    }

    /// Stable digest of the effective configuration.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        // where a run writes and when it stops do not change its trajectory,
        // so they stay out of the hash
        let mut cfg = self.clone();
        cfg.out_dir = PathBuf::new();
        cfg.budgets.max_env_steps = 0;
        cfg.budgets.max_cycles = None;
        let digest = Sha256::digest(cfg.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
