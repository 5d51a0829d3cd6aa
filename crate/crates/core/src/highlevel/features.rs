use crate::craftworld::{sightings, Item, TileKind, WorldState};
use crate::goalspace::Token;

const COMPASS: [&str; 8] = ["north", "north-east", "east", "south-east", "south", "south-west", "west", "north-west"];
const PER_KIND: usize = 2 + COMPASS.len();

/// Width of [`context_features`] for a vocabulary of `vocab_len` tokens.
pub fn context_dim(vocab_len: usize) -> usize {
    TileKind::COUNT * PER_KIND + TileKind::COUNT + 1 + 2 * Item::COUNT + vocab_len + 1
}

/// Structured caption features: per visible kind its nearest distance and
/// compass direction, the faced block, inventory, goal token bag, and the
/// fraction of high-level steps left.
pub fn context_features(state: &WorldState, view: usize, goal_tokens: &[Token], vocab_len: usize, remaining: u32, budget: u32) -> Vec<f64> {
    let mut x = vec![0.0; context_dim(vocab_len)];
    let radius = (view / 2).max(1) as f64;
    for s in sightings(state, view) {
        let base = s.kind.index() * PER_KIND;
        x[base] = 1.0;
        x[base + 1] = 1.0 - (s.distance as f64 - 1.0) / radius;
        let dir = COMPASS.iter().position(|&c| c == s.direction).unwrap();
        x[base + 2 + dir] = 1.0;
    }
    let mut at = TileKind::COUNT * PER_KIND;
    match state.faced() {
        Some(k) => x[at + k.index()] = 1.0,
        None => x[at + TileKind::COUNT] = 1.0,
    }
    at += TileKind::COUNT + 1;
    for item in Item::ALL {
        let c = state.inventory.get(item);
        x[at + item as usize] = (c.min(9) as f64) / 9.0;
        x[at + Item::COUNT + item as usize] = if c > 0 { 1.0 } else { 0.0 };
    }
    at += 2 * Item::COUNT;
    for &t in goal_tokens {
        x[at + t as usize] = 1.0;
    }
    at += vocab_len;
    x[at] = remaining as f64 / budget.max(1) as f64;
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::generate_world;

    #[test]
    fn layout_width_matches() {
        let w = generate_world(0, 16).unwrap();
        let x = context_features(&w, 9, &[1, 2], 40, 32, 64);
        assert_eq!(x.len(), context_dim(40));
        assert_eq!(*x.last().unwrap(), 0.5);
        assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
