use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::craftworld::VisualObs;
use crate::goalspace::SkillId;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSample {
    pub obs: VisualObs,
    pub skill: SkillId,
    pub outcome: bool,
}

/// Samples grouped by collection cycle; the oldest cycle is dropped when a
/// new one starts beyond the retention window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBuffer {
    retention: usize,
    cycles: VecDeque<Vec<EstimatorSample>>,
    new_since_update: usize,
}

impl SampleBuffer {
    pub fn new(retention: usize) -> Self {
        Self { retention: retention.max(1), cycles: VecDeque::from([Vec::new()]), new_since_update: 0 }
    }

    pub fn push(&mut self, sample: EstimatorSample) {
        self.cycles.back_mut().unwrap().push(sample);
        self.new_since_update += 1;
    }

    /// Opens a new cycle and evicts cycles beyond the retention window.
    pub fn end_cycle(&mut self) {
        self.cycles.push_back(Vec::new());
        while self.cycles.len() > self.retention {
            self.cycles.pop_front();
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn new_since_update(&self) -> usize {
        self.new_since_update
    }

    pub(crate) fn mark_consumed(&mut self) {
        self.new_since_update = 0;
    }

    pub fn iter(&self) -> impl Iterator<Item = &EstimatorSample> {
        self.cycles.iter().flatten()
    }

    pub fn cycles(&self) -> usize {
        self.cycles.len()
    }
}
