use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::craftworld::{ElementaryAction, VisualObs};

/// How a stored trajectory ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TrajEnd {
    /// The conditioning goal fired on the last transition.
    Success,
    /// Cut short; the critic's value at the final observation stands in for the rest.
    Timeout(VisualObs),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlRecord {
    pub obs: VisualObs,
    pub action: ElementaryAction,
    pub reward: f64,
    /// Set on the last transition of a trajectory.
    pub end: Option<TrajEnd>,
}

impl LlRecord {
    pub fn done(&self) -> bool {
        self.end.is_some()
    }

    pub fn timeout(&self) -> bool {
        matches!(self.end, Some(TrajEnd::Timeout(_)))
    }
}

/// FIFO ring of complete trajectories for one skill.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayBuffer {
    capacity: usize,
    records: VecDeque<LlRecord>,
    new_since_update: usize,
    total_pushed: u64,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self { capacity, records: VecDeque::new(), new_since_update: 0, total_pushed: 0 }
    }

    /// Appends a trajectory; the last record must carry its end marker.
    pub fn push_trajectory(&mut self, traj: impl IntoIterator<Item = LlRecord>) {
        for r in traj {
            if self.records.len() == self.capacity {
                self.records.pop_front();
            }
            self.records.push_back(r);
            self.new_since_update += 1;
            self.total_pushed += 1;
        }
        debug_assert!(self.records.back().is_none_or(LlRecord::done));
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn new_since_update(&self) -> usize {
        self.new_since_update
    }

    pub fn total_pushed(&self) -> u64 {
        self.total_pushed
    }

    pub(crate) fn mark_consumed(&mut self) {
        self.new_since_update = 0;
    }

    pub fn records(&self) -> &VecDeque<LlRecord> {
        &self.records
    }
}

/// Monte-Carlo returns per record. `bootstrap` gives the value used after a
/// timeout's final observation. Records before the first complete trajectory
/// end (after FIFO eviction) are still valid since returns run backward.
pub fn discounted_returns(records: &VecDeque<LlRecord>, gamma: f64, mut bootstrap: impl FnMut(&VisualObs) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; records.len()];
    let mut g = 0.0;
    for (i, r) in records.iter().enumerate().rev() {
        let next = match &r.end {
            Some(TrajEnd::Success) => 0.0,
            Some(TrajEnd::Timeout(last)) => bootstrap(last),
            None => g,
        };
        g = r.reward + gamma * next;
        out[i] = g;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{generate_world, DEFAULT_VIEW};

    fn rec(obs: &VisualObs, reward: f64, end: Option<TrajEnd>) -> LlRecord {
        LlRecord { obs: obs.clone(), action: ElementaryAction::Noop, reward, end }
    }

    #[test]
    fn returns_discount_and_bootstrap() {
        let obs = VisualObs::from_state(&generate_world(0, 9).unwrap(), DEFAULT_VIEW);
        let mut b = ReplayBuffer::new(100);
        b.push_trajectory([rec(&obs, 0.0, None), rec(&obs, 0.0, None), rec(&obs, 1.0, Some(TrajEnd::Success))]);
        b.push_trajectory([rec(&obs, 0.0, None), rec(&obs, 0.0, Some(TrajEnd::Timeout(obs.clone())))]);
        let r = discounted_returns(b.records(), 0.95, |_| 0.6);
        let expect = [0.95 * 0.95, 0.95, 1.0, 0.95 * 0.95 * 0.6, 0.95 * 0.6];
        for (a, e) in r.iter().zip(expect) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn eviction_is_fifo() {
        let obs = VisualObs::from_state(&generate_world(0, 9).unwrap(), DEFAULT_VIEW);
        let mut b = ReplayBuffer::new(3);
        for i in 0..5 {
            b.push_trajectory([LlRecord { obs: obs.clone(), action: ElementaryAction::from_index(i).unwrap(), reward: 0.0, end: Some(TrajEnd::Success) }]);
        }
        let kept: Vec<usize> = b.records().iter().map(|r| r.action.index()).collect();
        assert_eq!(kept, [2, 3, 4]);
        assert_eq!(b.new_since_update(), 5);
    }
}
