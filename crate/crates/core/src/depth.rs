use std::fmt;

use serde::{Serialize, Serializer};

/// Number of moves until Maker wins under optimal play, or `Infinite` when
/// Breaker wins.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum Depth {
    Finite(u32),
    #[default]
    Infinite,
}

/// Shortened depth as computed by the solver.
pub type SDepth = Depth;

impl Depth {
    pub const ZERO: Depth = Depth::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Depth::Finite(_))
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Depth::Finite(d) => Some(d),
            Depth::Infinite => None,
        }
    }

    /// One more move.
    pub fn succ(self) -> Depth {
        match self {
            Depth::Finite(d) => Depth::Finite(d + 1),
            Depth::Infinite => Depth::Infinite,
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(d) => write!(f, "{d}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite depths serialize as numbers, `Infinite` as `null`.
impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}
