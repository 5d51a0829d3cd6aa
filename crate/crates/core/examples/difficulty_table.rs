//! Prints the subgoal decomposition and difficulty of every achievement.
//!
//! cargo run --example difficulty_table

use autotelic::craftworld::{decomposition, Achievement};

fn main() {
    println!("{:<20} {:>5} {:>7} {:>5} {:>4} {:>10}", "goal", "go to", "collect", "place", "make", "difficulty");
    for goal in Achievement::TREE {
        let d = decomposition(goal).expect("tree goals have a decomposition");
        println!("{:<20} {:>5} {:>7} {:>5} {:>4} {:>10}", goal.text(), d.go_to, d.collect, d.place, d.make, d.score.to_string());
    }
}
