use crate::goalspace::{SkillId, SkillVocabulary, Token, EOS};
use crate::Result;

#[derive(Clone, Debug, Default)]
struct Node {
    children: Vec<(Token, usize)>,
    skill: Option<SkillId>,
}

/// Prefix tree over tokenized skill names. Every name ends with `EOS`, so
/// leaves are exactly the nodes reached by an `EOS` edge.
#[derive(Clone, Debug)]
pub struct SkillTrie {
    nodes: Vec<Node>,
}

impl SkillTrie {
    pub const ROOT: usize = 0;

    pub fn new<'a>(vocab: &SkillVocabulary, skills: impl IntoIterator<Item = (SkillId, &'a str)>) -> Result<Self> {
        let mut trie = Self { nodes: vec![Node::default()] };
        for (skill, text) in skills {
            trie.insert(skill, &vocab.tokenize(text)?);
        }
        Ok(trie)
    }

    pub fn insert(&mut self, skill: SkillId, tokens: &[Token]) {
        debug_assert_eq!(tokens.last(), Some(&EOS));
        let mut at = Self::ROOT;
        for &t in tokens {
            at = match self.child(at, t) {
                Some(next) => next,
                None => {
                    self.nodes.push(Node::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[at].children.push((t, next));
                    next
                }
            };
        }
        self.nodes[at].skill = Some(skill);
    }

    pub fn child(&self, node: usize, token: Token) -> Option<usize> {
        self.nodes[node].children.iter().find(|&&(t, _)| t == token).map(|&(_, n)| n)
    }

    /// Tokens that continue some admissible skill from `node`.
    pub fn allowed(&self, node: usize) -> Vec<Token> {
        self.nodes[node].children.iter().map(|&(t, _)| t).collect()
    }

    pub fn skill_at(&self, node: usize) -> Option<SkillId> {
        self.nodes[node].skill
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[Self::ROOT].children.is_empty()
    }

    /// Every root-to-leaf token path with its skill.
    pub fn paths(&self) -> Vec<(SkillId, Vec<Token>)> {
        let mut out = Vec::new();
        let mut stack = vec![(Self::ROOT, Vec::new())];
        while let Some((node, prefix)) = stack.pop() {
            if let Some(s) = self.nodes[node].skill {
                out.push((s, prefix.clone()));
            }
            for &(t, next) in &self.nodes[node].children {
                let mut p = prefix.clone();
                p.push(t);
                stack.push((next, p));
            }
        }
        out.sort();
        out
    }
}
