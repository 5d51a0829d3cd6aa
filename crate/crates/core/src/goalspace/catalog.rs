use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::craftworld::{Achievement, ElementaryAction, VerifierId};
use crate::{Error, Result};

pub type GoalId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalKind {
    Elementary,
    Achievement,
}

/// A textual goal bound to a verifier. `count > 1` marks an n-compositional
/// goal whose verifier must fire `count` times in the episode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Goal {
    pub id: GoalId,
    pub text: String,
    pub kind: GoalKind,
    pub verifier: VerifierId,
    pub verb: Option<String>,
    pub count: u32,
}

impl Goal {
    pub fn achievement(id: GoalId, a: Achievement) -> Self {
        let text = a.text();
        let verb = text.split(' ').next().map(str::to_owned);
        Self { id, text, kind: GoalKind::Achievement, verifier: VerifierId::Achievement(a), verb, count: 1 }
    }

    pub fn elementary(id: GoalId, a: ElementaryAction) -> Self {
        Self { id, text: a.text().to_owned(), kind: GoalKind::Elementary, verifier: VerifierId::Action(a), verb: None, count: 1 }
    }

    pub fn is_elementary(&self) -> bool {
        self.kind == GoalKind::Elementary
    }

    /// The action an elementary goal executes.
    pub fn action(&self) -> Option<ElementaryAction> {
        match (self.kind, self.verifier) {
            (GoalKind::Elementary, VerifierId::Action(a)) => Some(a),
            _ => None,
        }
    }

    pub fn is_go_to(&self) -> bool {
        matches!(self.verifier, VerifierId::Achievement(a) if a.go_to_target().is_some())
    }
}

/// One goal as written in a catalog file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalRecord {
    pub id: GoalId,
    pub text: String,
    pub kind: GoalKind,
    pub verifier: String,
    #[serde(default)]
    pub verb: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    goal: Vec<GoalRecord>,
    #[serde(default)]
    precedence: Vec<[String; 2]>,
}

/// Immutable set of goals with their precedence relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalCatalog {
    goals: Vec<Goal>,
    /// `(before, after)` index pairs into `goals`.
    precedence: Vec<(usize, usize)>,
    #[serde(skip)]
    by_text: HashMap<String, usize>,
}

const TREE_EDGES: [(Achievement, Achievement); 10] = [
    (Achievement::GoToTree, Achievement::CollectWood),
    (Achievement::CollectWood, Achievement::PlaceTable),
    (Achievement::PlaceTable, Achievement::GoToTable),
    (Achievement::PlaceTable, Achievement::MakeWoodPickaxe),
    (Achievement::MakeWoodPickaxe, Achievement::CollectStone),
    (Achievement::MakeWoodPickaxe, Achievement::CollectCoal),
    (Achievement::GoToStone, Achievement::CollectStone),
    (Achievement::GoToCoal, Achievement::CollectCoal),
    (Achievement::CollectStone, Achievement::PlaceFurnace),
    (Achievement::PlaceFurnace, Achievement::GoToFurnace),
];

impl Default for GoalCatalog {
    /// The 11 achievements followed by the 16 elementary actions.
    fn default() -> Self {
        let mut goals: Vec<Goal> = Achievement::TREE.into_iter().enumerate().map(|(i, a)| Goal::achievement(i as GoalId, a)).collect();
        let base = goals.len() as GoalId;
        goals.extend(ElementaryAction::ALL.into_iter().enumerate().map(|(i, a)| Goal::elementary(base + i as GoalId, a)));
        let index = |a: Achievement| Achievement::TREE.iter().position(|&b| b == a).unwrap();
        let precedence = TREE_EDGES.iter().map(|&(a, b)| (index(a), index(b))).collect();
        Self::new(goals, precedence).expect("built-in catalog is valid")
    }
}

impl GoalCatalog {
    pub fn new(goals: Vec<Goal>, precedence: Vec<(usize, usize)>) -> Result<Self> {
        let mut by_text = HashMap::new();
        for (i, g) in goals.iter().enumerate() {
            if by_text.insert(g.text.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate goal text {:?}", g.text)));
            }
        }
        let mut ids: Vec<_> = goals.iter().map(|g| g.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("duplicate goal id".into()));
        }
        for a in ElementaryAction::ALL {
            if !goals.iter().any(|g| g.action() == Some(a)) {
                return Err(Error::Config(format!("elementary action {:?} has no goal", a.text())));
            }
        }
        if precedence.iter().any(|&(a, b)| a >= goals.len() || b >= goals.len()) {
            return Err(Error::Config("precedence refers to a missing goal".into()));
        }
        let catalog = Self { goals, precedence, by_text };
        if catalog.topological_order().is_none() {
            return Err(Error::Config("precedence relation has a cycle".into()));
        }
        Ok(catalog)
    }

    /// Parses a TOML catalog: `[[goal]]` records and `precedence = [[before, after], ...]` by text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut goals = Vec::with_capacity(file.goal.len());
        for r in file.goal {
            let verifier = VerifierId::from_key(&r.verifier).ok_or_else(|| Error::lookup("verifier", &r.verifier))?;
            let verb = r.verb.or_else(|| (r.kind == GoalKind::Achievement).then(|| r.text.split(' ').next().unwrap_or("").to_owned()));
            goals.push(Goal { id: r.id, text: r.text, kind: r.kind, verifier, verb, count: 1 });
        }
        let find = |t: &str| goals.iter().position(|g| g.text == t).ok_or_else(|| Error::lookup("goal", t));
        let mut precedence = Vec::new();
        for [a, b] in &file.precedence {
            precedence.push((find(a)?, find(b)?));
        }
        Self::new(goals, precedence)
    }

    pub fn to_toml(&self) -> String {
        let file = CatalogFile {
            goal: self
                .goals
                .iter()
                .map(|g| GoalRecord { id: g.id, text: g.text.clone(), kind: g.kind, verifier: g.verifier.key(), verb: g.verb.clone() })
                .collect(),
            precedence: self.precedence.iter().map(|&(a, b)| [self.goals[a].text.clone(), self.goals[b].text.clone()]).collect(),
        };
        toml::to_string(&file).expect("catalog serializes")
    }

    /// Keeps the named achievements and every elementary goal; precedence
    /// pairs among kept goals survive.
    pub fn restrict<S: AsRef<str>>(&self, achievements: &[S]) -> Result<Self> {
        let mut keep = vec![false; self.goals.len()];
        for text in achievements {
            let i = self.index_of(text.as_ref()).ok_or_else(|| Error::lookup("goal", text.as_ref()))?;
            keep[i] = true;
        }
        for (i, g) in self.goals.iter().enumerate() {
            keep[i] |= g.is_elementary();
        }
        let mut map = vec![usize::MAX; self.goals.len()];
        let mut goals = Vec::new();
        for (i, g) in self.goals.iter().enumerate().filter(|&(i, _)| keep[i]) {
            map[i] = goals.len();
            goals.push(g.clone());
        }
        let precedence = self.precedence.iter().filter(|&&(a, b)| keep[a] && keep[b]).map(|&(a, b)| (map[a], map[b])).collect();
        Self::new(goals, precedence)
    }

    /// Restores the text index after deserialization.
    pub fn reindex(&mut self) {
        self.by_text = self.goals.iter().enumerate().map(|(i, g)| (g.text.clone(), i)).collect();
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn goals(&self) -> &[Goal] {
        &self.goals
    }

    pub fn get(&self, index: usize) -> &Goal {
        &self.goals[index]
    }

    pub fn index_of(&self, text: &str) -> Option<usize> {
        self.by_text.get(text).copied()
    }

    pub fn by_text(&self, text: &str) -> Result<&Goal> {
        self.index_of(text).map(|i| &self.goals[i]).ok_or_else(|| Error::lookup("goal", text))
    }

    pub fn achievements(&self) -> impl Iterator<Item = (usize, &Goal)> {
        self.goals.iter().enumerate().filter(|(_, g)| !g.is_elementary())
    }

    pub fn elementary(&self) -> impl Iterator<Item = (usize, &Goal)> {
        self.goals.iter().enumerate().filter(|(_, g)| g.is_elementary())
    }

    /// Catalog index of the goal executing `action`.
    pub fn index_of_action(&self, action: ElementaryAction) -> usize {
        self.goals.iter().position(|g| g.action() == Some(action)).expect("every action has a goal")
    }

    pub fn precedence(&self) -> &[(usize, usize)] {
        &self.precedence
    }

    /// Whether `a` is a (transitive) prerequisite of `b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        let mut stack = vec![a];
        let mut seen = vec![false; self.goals.len()];
        while let Some(x) = stack.pop() {
            for &(p, q) in &self.precedence {
                if p == x && !seen[q] {
                    if q == b {
                        return true;
                    }
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        false
    }

    /// Kahn ordering of the precedence relation, `None` when it has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.goals.len();
        let mut indegree = vec![0usize; n];
        for &(_, b) in &self.precedence {
            indegree[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &(a, b) in &self.precedence {
                if a == i {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}
