use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::competence::EstimatorStats;
use crate::evaluation::EvalReport;
use crate::highlevel::HlTrainStats;
use crate::lowlevel::LlTrainStats;
use crate::Result;

/// Training counters stamped on every record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub hl_steps: u64,
    pub env_steps: u64,
    pub cycles: u64,
    pub attempts: u64,
    pub episodes: u64,
}

/// One finished training attempt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub env: usize,
    pub goal: String,
    pub success: bool,
    pub hl_steps: u32,
    pub env_steps: usize,
    /// Longest single skill execution.
    pub max_skill_steps: usize,
    /// High-level steps taken in the episode so far.
    pub episode_hl_steps: u32,
    pub skills: Vec<String>,
    pub explored: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkillSpaceRecord {
    pub cycle: u64,
    /// Mean admissible-set size over the cycle's decisions.
    pub mean_admissible: f64,
    /// Inclusion frequency per non-elementary skill over the cycle.
    pub inclusion: Vec<(String, f64)>,
    pub update_counts: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerRecord {
    pub epsilon: f64,
    pub entries: u64,
    pub ring_versions: Vec<u64>,
    pub stats: EstimatorStats,
}

/// Line-delimited metrics, one JSON object per line tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricsRecord {
    Eval { at: Counters, report: EvalReport },
    HlTrain { at: Counters, stats: HlTrainStats },
    LlTrain { at: Counters, skill_text: String, stats: LlTrainStats },
    Estimator { at: Counters, stats: EstimatorStats },
    Sampler { at: Counters, record: SamplerRecord },
    Skillspace { at: Counters, record: SkillSpaceRecord },
    Attempt { at: Counters, record: AttemptRecord },
}

impl MetricsRecord {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Eval { .. } => "eval",
            Self::HlTrain { .. } => "hl_train",
            Self::LlTrain { .. } => "ll_train",
            Self::Estimator { .. } => "estimator",
            Self::Sampler { .. } => "sampler",
            Self::Skillspace { .. } => "skillspace",
            Self::Attempt { .. } => "attempt",
        }
    }

    pub fn at(&self) -> &Counters {
        match self {
            Self::Eval { at, .. }
            | Self::HlTrain { at, .. }
            | Self::LlTrain { at, .. }
            | Self::Estimator { at, .. }
            | Self::Sampler { at, .. }
            | Self::Skillspace { at, .. }
            | Self::Attempt { at, .. } => at,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("metrics record serializes")
    }
}

/// Destination for metrics records.
pub trait MetricsSink {
    fn emit(&mut self, record: MetricsRecord) -> Result<()>;
}

impl MetricsSink for Vec<MetricsRecord> {
    fn emit(&mut self, record: MetricsRecord) -> Result<()> {
        self.push(record);
        Ok(())
    }
}

/// Drops every record.
pub struct NullSink;

impl MetricsSink for NullSink {
    fn emit(&mut self, _: MetricsRecord) -> Result<()> {
        Ok(())
    }
}

/// Appends records to a JSONL file, one flushed line per record.
pub struct JsonlWriter {
    out: BufWriter<File>,
}

impl JsonlWriter {
    pub fn append(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { out: BufWriter::new(file) })
    }
}

impl MetricsSink for JsonlWriter {
    fn emit(&mut self, record: MetricsRecord) -> Result<()> {
        let mut line = record.to_line();
        line.push('\n');
        self.out.write_all(line.as_bytes())?;
        self.out.flush()?;
        Ok(())
    }
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRecord>> {
    let file = File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
