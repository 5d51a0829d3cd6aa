//! The goal catalog: precedence, synonym reformulations, n-compositional
//! goals, tokenization and the TOML catalog format.
//!
//! cargo run --example goal_space

use autotelic::goalspace::{make_n_compositional, GoalCatalog, Lexicon, SkillVocabulary};

fn main() -> autotelic::Result<()> {
    let catalog = GoalCatalog::default();
    let lexicon = Lexicon::default();
    let vocab = SkillVocabulary::for_catalog(&catalog, &lexicon);
    println!("{} goals, {} elementary, vocabulary of {} words", catalog.len(), catalog.elementary().count(), vocab.len());
    for (i, goal) in catalog.achievements() {
        let before: Vec<&str> = catalog.precedence().iter().filter(|&&(_, b)| b == i).map(|&(a, _)| catalog.get(a).text.as_str()).collect();
        println!("{:<20} after {:?}", goal.text, before);
    }
    let table = catalog.by_text("place table")?;
    println!("\nreformulations of {:?}: {:?}", table.text, lexicon.reformulate(table));
    let three = make_n_compositional(catalog.by_text("collect wood")?, 3)?;
    println!("compositional: {:?} (verifier fires {} times)", three.text, three.count);
    let tokens = vocab.tokenize(&three.text)?;
    println!("tokens {:?} -> {:?}", tokens, vocab.detokenize(&tokens));

    let subset = catalog.restrict(&["go to tree", "collect wood", "place table"])?;
    println!("\nrestricted catalog as TOML ({} goals):", subset.len());
    for line in subset.to_toml().lines().take(12) {
        println!("  {line}");
    }
    Ok(())
}
