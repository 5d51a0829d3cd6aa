use serde::{Deserialize, Serialize};

use super::catalog::{Goal, GoalKind};
use crate::craftworld::VerifierId;
use crate::{Error, Result};

/// Builds the goal "<verb> n <object>s" whose verifier needs `n` base firings.
pub fn make_n_compositional(goal: &Goal, n: u32) -> Result<Goal> {
    if !(2..=4).contains(&n) {
        return Err(Error::NotComposable(format!("n must be in 2..=4, got {n}")));
    }
    if goal.kind != GoalKind::Achievement || goal.count != 1 {
        return Err(Error::NotComposable(format!("{:?} is not a base achievement", goal.text)));
    }
    if goal.is_go_to() {
        return Err(Error::NotComposable(format!("{:?} cannot be repeated", goal.text)));
    }
    let verb = goal.verb.as_deref().unwrap_or_else(|| goal.text.split(' ').next().unwrap_or(""));
    let object = goal.text.strip_prefix(verb).unwrap_or(&goal.text).trim();
    Ok(Goal {
        id: goal.id,
        text: format!("{verb} {n} {object}s"),
        kind: GoalKind::Achievement,
        verifier: goal.verifier,
        verb: Some(verb.to_owned()),
        count: n,
    })
}

/// Counts base-verifier firings within an episode and fires on the n-th.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingVerifier {
    pub base: VerifierId,
    pub target: u32,
    pub seen: u32,
}

impl CountingVerifier {
    pub fn new(goal: &Goal) -> Self {
        Self { base: goal.verifier, target: goal.count.max(1), seen: 0 }
    }

    /// Feeds one transition's events; true exactly on the `target`-th firing.
    pub fn observe(&mut self, events: &[VerifierId]) -> bool {
        if events.contains(&self.base) {
            self.seen += 1;
            self.seen == self.target
        } else {
            false
        }
    }

    pub fn reset(&mut self) {
        self.seen = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goalspace::GoalCatalog;

    #[test]
    fn texts_follow_the_literal_pattern() {
        let c = GoalCatalog::default();
        assert_eq!(make_n_compositional(c.by_text("collect wood").unwrap(), 2).unwrap().text, "collect 2 woods");
        assert_eq!(make_n_compositional(c.by_text("make wood pickaxe").unwrap(), 3).unwrap().text, "make 3 wood pickaxes");
        assert!(make_n_compositional(c.by_text("go to tree").unwrap(), 2).is_err());
        assert!(make_n_compositional(c.by_text("move up").unwrap(), 2).is_err());
        assert!(make_n_compositional(c.by_text("collect wood").unwrap(), 5).is_err());
    }

    #[test]
    fn fires_only_on_the_nth_completion() {
        let c = GoalCatalog::default();
        let g = make_n_compositional(c.by_text("collect wood").unwrap(), 3).unwrap();
        let mut v = CountingVerifier::new(&g);
        let hit = [g.verifier];
        let fired: Vec<bool> = (0..5).map(|_| v.observe(&hit)).collect();
        assert_eq!(fired, [false, false, true, false, false]);
        assert!(!v.observe(&[]));
    }
}
