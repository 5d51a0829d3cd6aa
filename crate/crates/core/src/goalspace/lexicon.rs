use serde::{Deserialize, Serialize};

use super::catalog::Goal;

/// Verb to synonyms map used for reformulating goals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lexicon {
    pub entries: Vec<(String, Vec<String>)>,
}

impl Default for Lexicon {
    fn default() -> Self {
        let e = |verb: &str, syn: [&str; 5]| (verb.to_owned(), syn.iter().map(|s| s.to_string()).collect());
        Self {
            entries: vec![
                e("collect", ["gather", "acquire", "procure", "harvest", "amass"]),
                e("make", ["craft", "construct", "build", "acquire", "create"]),
                e("place", ["put", "putdown", "install", "deploy", "position"]),
                e("go", ["move", "walk", "proceed", "travel", "run"]),
            ],
        }
    }
}

impl Lexicon {
    pub fn synonyms(&self, verb: &str) -> &[String] {
        self.entries.iter().find(|(v, _)| v == verb).map_or(&[], |(_, s)| s.as_slice())
    }

    pub fn reformulate(&self, goal: &Goal) -> Vec<String> {
        let Some(verb) = goal.verb.as_deref() else {
            return Vec::new();
        };
        let Some(rest) = goal.text.strip_prefix(verb) else {
            return Vec::new();
        };
        self.synonyms(verb).iter().map(|s| format!("{s}{rest}")).collect()
    }

    /// Every word any reformulation can introduce.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().flat_map(|(v, s)| std::iter::once(v.as_str()).chain(s.iter().map(String::as_str)))
    }
}

/// Verb-substituted reformulations of `goal` under the default lexicon.
/// Goals without a lexicon verb have none.
pub fn expand_synonyms(goal: &Goal) -> Vec<String> {
    Lexicon::default().reformulate(goal)
}
