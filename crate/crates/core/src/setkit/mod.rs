//! Decidable algebra of ultimately periodic subsets of ω, plus a product
//! form over ω×ω flattened through `⟨n, m⟩ = 2ⁿ(2m+1) − 1`.

mod grid;
mod parse;
mod upset;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use grid::{pair, unpair, GridSet};
pub use parse::parse_set;
pub use upset::UpSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("period word must be nonempty")]
    EmptyPeriod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CardClass {
    Finite,
    InfiniteCoinfinite,
    Cofinite,
}

/// Cap on linear scans through flattened grid sets.
pub const GRID_SCAN_LIMIT: u64 = 1 << 16;

/// A move or outcome set: either periodic on ω or a grid over ω×ω seen
/// through the pairing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Subset {
    Up(UpSet),
    Grid(GridSet),
}

impl From<UpSet> for Subset {
    fn from(s: UpSet) -> Self {
        Subset::Up(s)
    }
}

impl From<GridSet> for Subset {
    fn from(g: GridSet) -> Self {
        Subset::Grid(g)
    }
}

impl Subset {
    pub fn omega() -> Self {
        Subset::Up(UpSet::omega())
    }

    pub fn empty() -> Self {
        Subset::Up(UpSet::empty())
    }

    pub fn as_up(&self) -> Option<&UpSet> {
        match self {
            Subset::Up(s) => Some(s),
            Subset::Grid(_) => None,
        }
    }

    pub fn to_grid(&self) -> GridSet {
        match self {
            Subset::Up(s) => GridSet::from_flat(s),
            Subset::Grid(g) => g.clone(),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Subset::Up(s) => s.contains(n),
            Subset::Grid(g) => g.contains_flat(n),
        }
    }

    fn lift(
        &self,
        other: &Subset,
        up: impl Fn(&UpSet, &UpSet) -> UpSet,
        grid: impl Fn(&GridSet, &GridSet) -> GridSet,
    ) -> Subset {
        match (self, other) {
            (Subset::Up(a), Subset::Up(b)) => Subset::Up(up(a, b)),
            _ => Subset::Grid(grid(&self.to_grid(), &other.to_grid())),
        }
    }

    pub fn and(&self, other: &Subset) -> Subset {
        self.lift(other, UpSet::and, GridSet::and)
    }

    pub fn or(&self, other: &Subset) -> Subset {
        self.lift(other, UpSet::or, GridSet::or)
    }

    pub fn diff(&self, other: &Subset) -> Subset {
        self.lift(other, UpSet::diff, GridSet::diff)
    }

    pub fn complement(&self) -> Subset {
        match self {
            Subset::Up(s) => Subset::Up(s.complement()),
            Subset::Grid(g) => Subset::Grid(g.complement()),
        }
    }

    pub fn card_class(&self) -> CardClass {
        match self {
            Subset::Up(s) => s.card_class(),
            Subset::Grid(g) => g.card_class(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.card_class() == CardClass::Finite
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_cofinite(&self) -> bool {
        self.card_class() == CardClass::Cofinite
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Subset::Up(s) => s.is_empty(),
            Subset::Grid(g) => g.is_empty(),
        }
    }

    pub fn almost_subset(&self, other: &Subset) -> bool {
        self.diff(other).is_finite()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.diff(other).is_empty()
    }

    /// Least element `≥ n`. Exact for periodic sets; grid sets are scanned
    /// up to [`GRID_SCAN_LIMIT`] past `n`.
    pub fn next_at_or_after(&self, n: u64) -> Option<u64> {
        match self {
            Subset::Up(s) => s.next_at_or_after(n),
            Subset::Grid(g) => (n..n.saturating_add(GRID_SCAN_LIMIT)).find(|&x| g.contains_flat(x)),
        }
    }

    /// Least element `≥ n` not in `used`.
    pub fn next_unused(&self, n: u64, used: &std::collections::BTreeSet<u64>) -> Option<u64> {
        let mut cur = n;
        loop {
            let x = self.next_at_or_after(cur)?;
            if !used.contains(&x) {
                return Some(x);
            }
            cur = x.checked_add(1)?;
        }
    }

    pub fn elements_below(&self, bound: u64) -> Vec<u64> {
        match self {
            Subset::Up(s) => s.elements_below(bound),
            Subset::Grid(g) => (0..bound).filter(|&x| g.contains_flat(x)).collect(),
        }
    }

    /// `Some(m)` iff this is exactly `[m, ∞)`.
    pub fn as_tail(&self) -> Option<u64> {
        match self {
            Subset::Up(s) => s.as_tail(),
            Subset::Grid(g) => {
                // grids are only tails if they happen to be ω
                if g.card_class() == CardClass::Cofinite && g.complement().is_empty() {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Subset::Up(s) => s.descriptor(),
            Subset::Grid(g) => g.descriptor(),
        }
    }

    pub fn window(&self, bound: u64) -> Window {
        Window::of(|n| self.contains(n), bound)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for Subset {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_set(s)
    }
}

impl FromStr for UpSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_set(s)? {
            Subset::Up(u) => Ok(u),
            Subset::Grid(_) => Err(SetError::Syntax { pos: 0, msg: "expected an up: descriptor".into() }),
        }
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for UpSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for UpSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Characteristic word of a set restricted to `[0, bound)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    bound: u64,
    bits: Vec<bool>,
}

impl Window {
    pub fn of(member: impl Fn(u64) -> bool, bound: u64) -> Self {
        Window { bound, bits: (0..bound).map(member).collect() }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, n: u64) -> bool {
        self.bits[n as usize]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}
