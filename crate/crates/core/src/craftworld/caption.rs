//! Textual observation of a world state for the high level.

use std::fmt::Write;

use super::action::ElementaryAction;
use super::state::{Pos, WorldState};
use super::tile::TileKind;

pub const GAME_SENTENCE: &str =
    "You are playing a Minecraft like game. You can use elementary actions or, if available, more efficient low-level policies.";

/// Everything a caption needs besides the world itself.
#[derive(Clone, Debug, Default)]
pub struct CaptionContext<'a> {
    pub goal: &'a str,
    pub remaining_steps: u32,
    pub steps_done: u32,
    pub skills: &'a [String],
    pub last_action: &'a str,
    /// Side of the square field of view.
    pub view: usize,
}

/// One "You see" entry: the nearest visible instance of a kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sighting {
    pub kind: TileKind,
    pub distance: u32,
    pub direction: &'static str,
}

/// Eight-way compass label of an offset, with y growing southward.
pub fn compass(dx: i32, dy: i32) -> &'static str {
    const LABELS: [&str; 8] = ["east", "south-east", "south", "south-west", "west", "north-west", "north", "north-east"];
    let angle = (dy as f64).atan2(dx as f64);
    let octant = (angle / (std::f64::consts::PI / 4.0)).round() as i32;
    LABELS[octant.rem_euclid(8) as usize]
}

/// Nearest instance of each visible kind, by Chebyshev distance, excluding the
/// agent's own cell. Ties keep the first cell in row-major order.
pub fn sightings(state: &WorldState, view: usize) -> Vec<Sighting> {
    let r = (view / 2) as i32;
    let mut best: [Option<(u32, i32, i32)>; TileKind::COUNT] = [None; TileKind::COUNT];
    for dy in -r..=r {
        for dx in -r..=r {
            if dx == 0 && dy == 0 {
                continue;
            }
            let Some(kind) = state.tile(Pos::new(state.agent_pos.x + dx, state.agent_pos.y + dy)) else {
                continue;
            };
            let d = dx.unsigned_abs().max(dy.unsigned_abs());
            let slot = &mut best[kind.index()];
            if slot.is_none_or(|(bd, _, _)| d < bd) {
                *slot = Some((d, dx, dy));
            }
        }
    }
    TileKind::ALL
        .into_iter()
        .filter_map(|kind| best[kind.index()].map(|(distance, dx, dy)| Sighting { kind, distance, direction: compass(dx, dy) }))
        .collect()
}

fn plural(n: u32, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn caption(state: &WorldState, ctx: &CaptionContext<'_>) -> String {
    let view = if ctx.view == 0 { super::observation::DEFAULT_VIEW } else { ctx.view };
    let mut s = String::new();
    let _ = writeln!(s, "{GAME_SENTENCE}\n");
    let _ = writeln!(s, "Your task: {} in {} steps\n", ctx.goal, ctx.remaining_steps);
    let _ = writeln!(s, "You have already done {}.\n", plural(ctx.steps_done, "step"));
    let _ = writeln!(s, "Your coordinates: ({},{})\n", state.agent_pos.x, state.agent_pos.y);

    let _ = writeln!(s, "You see:");
    for seen in sightings(state, view) {
        let _ = writeln!(s, "- {} {} to your {}", seen.kind.name(), plural(seen.distance, "step"), seen.direction);
    }
    s.push('\n');

    match state.faced() {
        Some(kind) => {
            let _ = writeln!(s, "You face {} at your front.\n", kind.name());
        }
        None => s.push_str("You face the edge of the world at your front.\n\n"),
    }

    let _ = writeln!(s, "Your inventory:");
    for (item, count) in state.inventory.iter() {
        let _ = writeln!(s, "- {}: {count}", item.name());
    }
    s.push('\n');

    for p in &state.placements {
        let _ = writeln!(s, "You placed {} at ({},{})", p.kind.placement_name(), p.pos.x, p.pos.y);
    }
    if !state.placements.is_empty() {
        s.push('\n');
    }

    let _ = writeln!(s, "Elementary actions you can take:");
    for a in ElementaryAction::ALL {
        match a.requirement() {
            Some(req) => {
                let _ = writeln!(s, "- {} ({req})", a.text());
            }
            None => {
                let _ = writeln!(s, "- {}", a.text());
            }
        }
    }
    s.push('\n');

    if !ctx.skills.is_empty() {
        let _ = writeln!(s, "Low-level policies you can call:");
        for skill in ctx.skills {
            let _ = writeln!(s, "- {skill}");
        }
        s.push('\n');
    }

    let _ = writeln!(s, "The last action you took: {}", ctx.last_action);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compass_octants() {
        assert_eq!(compass(0, -3), "north");
        assert_eq!(compass(3, 0), "east");
        assert_eq!(compass(-2, 2), "south-west");
        assert_eq!(compass(1, -3), "north");
        assert_eq!(compass(2, -3), "north-east");
    }

    #[test]
    fn plural_forms() {
        assert_eq!(plural(1, "step"), "1 step");
        assert_eq!(plural(4, "step"), "4 steps");
    }
}
