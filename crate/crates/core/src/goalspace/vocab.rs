use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::catalog::GoalCatalog;
use super::compose::make_n_compositional;
use super::lexicon::Lexicon;
use crate::craftworld::Achievement;
use crate::{Error, Result};

pub type Token = u16;

/// End-of-sequence token, always id 0.
pub const EOS: Token = 0;
const EOS_TEXT: &str = "<eos>";

/// Word-level vocabulary over every canonical, synonym and compositional goal text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkillVocabulary {
    words: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, Token>,
}

impl SkillVocabulary {
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        let set: BTreeSet<&str> = words.into_iter().collect();
        let words: Vec<String> = std::iter::once(EOS_TEXT).chain(set).map(str::to_owned).collect();
        let mut v = Self { words, index: HashMap::new() };
        v.reindex();
        v
    }

    /// Covers the catalog, every lexicon reformulation, n-compositional texts
    /// for n in 2..=4, and the extra probe goals outside the catalog.
    pub fn for_catalog(catalog: &GoalCatalog, lexicon: &Lexicon) -> Self {
        let mut texts: Vec<String> = Vec::new();
        for g in catalog.goals() {
            texts.push(g.text.clone());
            texts.extend(lexicon.reformulate(g));
            for n in 2..=4 {
                if let Ok(c) = make_n_compositional(g, n) {
                    texts.push(c.text);
                }
            }
        }
        let sword = Achievement::MakeWoodSword.text();
        texts.push(sword.clone());
        for n in 2..=4 {
            texts.push(format!("make {n} wood swords"));
        }
        texts.extend(lexicon.synonyms("make").iter().map(|s| format!("{s}{}", &sword["make".len()..])));
        let words: Vec<&str> = texts.iter().flat_map(|t| t.split(' ')).chain(lexicon.words()).collect();
        Self::from_words(words)
    }

    pub fn reindex(&mut self) {
        self.index = self.words.iter().enumerate().map(|(i, w)| (w.clone(), i as Token)).collect();
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, t: Token) -> &str {
        &self.words[t as usize]
    }

    pub fn token(&self, word: &str) -> Option<Token> {
        self.index.get(word).copied()
    }

    /// Word tokens followed by `EOS`.
    pub fn tokenize(&self, text: &str) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        for w in text.split_whitespace() {
            out.push(self.token(w).filter(|&t| t != EOS).ok_or_else(|| Error::OutOfVocabulary(w.to_owned()))?);
        }
        out.push(EOS);
        Ok(out)
    }

    /// Inverse of [`tokenize`](Self::tokenize); stops at the first `EOS`.
    pub fn detokenize(&self, tokens: &[Token]) -> String {
        tokens.iter().take_while(|&&t| t != EOS).map(|&t| self.word(t)).collect::<Vec<_>>().join(" ")
    }
}
