//! Decodes skill names token by token under a prefix-trie mask, so the
//! high-level policy can only name admissible skills.
//!
//! cargo run --example constrained_decoding

use autotelic::goalspace::{GoalCatalog, Lexicon, SkillVocabulary};
use autotelic::highlevel::{HighLevelNet, SkillTrie};
use autotelic::lowlevel::ActMode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> autotelic::Result<()> {
    let catalog = GoalCatalog::default();
    let vocab = SkillVocabulary::for_catalog(&catalog, &Lexicon::default());
    let admissible = ["move left", "noop", "go to tree", "collect wood", "place table"];
    let trie = SkillTrie::new(&vocab, admissible.iter().map(|t| (catalog.index_of(t).unwrap(), *t)))?;
    let net = HighLevelNet::new(8, vocab.len(), 32, 16, &[16]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = net.init(&mut rng);
    let x = [0.5, 0.1, 0.0, 1.0, 0.3, 0.0, 0.7, 0.2];

    println!("path probabilities:");
    let mut total = 0.0;
    for (skill, tokens) in trie.paths() {
        let p = net.path_log_prob(&params, &x, &trie, &tokens).exp();
        total += p;
        println!("  {:<14} {p:.4}", catalog.get(skill).text);
    }
    println!("  sum {total:.9}");

    for _ in 0..5 {
        let d = net.decode(&params, None, &x, &trie, ActMode::Sample, &mut rng);
        let masks: Vec<usize> = d.masks.iter().map(Vec::len).collect();
        println!("sampled {:<14} log p {:.3}, allowed tokens per position {masks:?}", catalog.get(d.skill).text, d.log_prob());
    }
    Ok(())
}
