use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum TileKind {
    Grass,
    Sand,
    Path,
    Water,
    Tree,
    Bush,
    Stone,
    Coal,
    Iron,
    Table,
    Furnace,
    Plant,
    PlacedStone,
}

impl TileKind {
    pub const COUNT: usize = 13;

    pub const ALL: [TileKind; Self::COUNT] = [
        TileKind::Grass,
        TileKind::Sand,
        TileKind::Path,
        TileKind::Water,
        TileKind::Tree,
        TileKind::Bush,
        TileKind::Stone,
        TileKind::Coal,
        TileKind::Iron,
        TileKind::Table,
        TileKind::Furnace,
        TileKind::Plant,
        TileKind::PlacedStone,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn is_walkable(self) -> bool {
        matches!(self, TileKind::Grass | TileKind::Sand | TileKind::Path)
    }

    /// Surfaces a table or furnace can be placed on.
    pub fn is_buildable(self) -> bool {
        self.is_walkable()
    }

    pub fn name(self) -> &'static str {
        match self {
            TileKind::Grass => "grass",
            TileKind::Sand => "sand",
            TileKind::Path => "path",
            TileKind::Water => "water",
            TileKind::Tree => "tree",
            TileKind::Bush => "bush",
            TileKind::Stone => "stone",
            TileKind::Coal => "coal",
            TileKind::Iron => "iron",
            TileKind::Table => "table",
            TileKind::Furnace => "furnace",
            TileKind::Plant => "plant",
            TileKind::PlacedStone => "placed stone",
        }
    }

    /// Name used in "You placed ..." caption lines.
    pub(crate) fn placement_name(self) -> &'static str {
        match self {
            TileKind::PlacedStone => "stone",
            other => other.name(),
        }
    }
}
