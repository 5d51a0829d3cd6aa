//! Run configuration, checkpoints and the metrics stream.

pub mod checkpoint;
mod config;
mod metrics;

pub use config::{Budgets, EvalConfig, GoalsConfig, HighLevelConfig, RunConfig, SkillSpaceConfig, WorldConfig};
pub use metrics::{read_metrics, AttemptRecord, Counters, JsonlWriter, MetricsRecord, MetricsSink, NullSink, SamplerRecord, SkillSpaceRecord};
