//! The game grid 𝔊(𝒳, 𝒴, 𝒵) and the integer variant 𝔊₁(ℱ).
//!
//! At stage `k` player I picks `X_k ∈ 𝒳` and II answers with `n_k ∈ X_k`
//! (or a nonempty finite `s_k ⊆ X_k`); II wins iff the outcome lies in 𝒵.

mod certify;
mod engine;
mod g1;
mod transcript;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::{Depth, FilterError, FilterSpec};
use crate::setkit::Subset;

pub use certify::{certify_outcome, Certificate, Certifier, CertifyError, Verdict, VerdictTag};
pub use engine::run_bounded;
pub use g1::{run_g1, ConstReply, G1Flags, G1History, G1StrategyI, G1StrategyII, G1Threshold, NextAbove};
pub use transcript::{Header, MoveRecord, MoveValue, Player, Transcript, TranscriptError};

/// The family 𝒳 player I draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    Fr,
    #[serde(rename = "allinf")]
    AllInfinite,
    F,
    Fplus,
}

/// 𝒴: single elements or nonempty finite blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "elem")]
    Element,
    #[serde(rename = "block")]
    FiniteBlock,
}

/// 𝒵: `Fcomp` is the complement of ℱ, `Fstar` the dual ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Payoff {
    F,
    Fplus,
    Fcomp,
    Fstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    G1,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("game spec needs `<mover>,<move>,<payoff>`, got `{0}`")]
    Shape(String),
    #[error("unknown {what} `{value}`")]
    Unknown { what: &'static str, value: String },
    #[error("the integer variant is fixed to fr,elem,f")]
    G1Shape,
}

impl FromStr for Mover {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "fr" => Mover::Fr,
            "allinf" => Mover::AllInfinite,
            "f" => Mover::F,
            "fplus" => Mover::Fplus,
            _ => return Err(ConfigError::Unknown { what: "mover", value: s.into() }),
        })
    }
}

impl FromStr for MoveKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "elem" => MoveKind::Element,
            "block" => MoveKind::FiniteBlock,
            _ => return Err(ConfigError::Unknown { what: "move kind", value: s.into() }),
        })
    }
}

impl FromStr for Payoff {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "f" => Payoff::F,
            "fplus" => Payoff::Fplus,
            "fcomp" => Payoff::Fcomp,
            "fstar" => Payoff::Fstar,
            _ => return Err(ConfigError::Unknown { what: "payoff", value: s.into() }),
        })
    }
}

impl fmt::Display for Mover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mover::Fr => "fr",
            Mover::AllInfinite => "allinf",
            Mover::F => "f",
            Mover::Fplus => "fplus",
        })
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Element => "elem",
            MoveKind::FiniteBlock => "block",
        })
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Payoff::F => "f",
            Payoff::Fplus => "fplus",
            Payoff::Fcomp => "fcomp",
            Payoff::Fstar => "fstar",
        })
    }
}

impl Payoff {
    /// The payoff of the dual game: 𝒵 ↦ 𝒵ᶜ.
    pub fn complement(self) -> Payoff {
        match self {
            Payoff::F => Payoff::Fcomp,
            Payoff::Fcomp => Payoff::F,
            Payoff::Fplus => Payoff::Fstar,
            Payoff::Fstar => Payoff::Fplus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub mover: Mover,
    #[serde(rename = "move")]
    pub move_kind: MoveKind,
    pub payoff: Payoff,
    pub filter: FilterSpec,
    pub variant: Variant,
    pub depth: Depth,
}

impl GameConfig {
    pub fn new(mover: Mover, move_kind: MoveKind, payoff: Payoff, filter: FilterSpec) -> Self {
        GameConfig {
            mover,
            move_kind,
            payoff,
            filter,
            variant: Variant::Standard,
            depth: Depth::default(),
        }
    }

    /// 𝔊₁(ℱ): I names integers, II answers with integers.
    pub fn g1(filter: FilterSpec) -> Self {
        GameConfig {
            variant: Variant::G1,
            ..GameConfig::new(Mover::Fr, MoveKind::Element, Payoff::F, filter)
        }
    }

    /// Parses `<mover>,<move>,<payoff>` as used by `--game`.
    pub fn parse_game(text: &str, filter: FilterSpec) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let [m, k, p] = parts.as_slice() else {
            return Err(ConfigError::Shape(text.into()));
        };
        Ok(GameConfig::new(m.parse()?, k.parse()?, p.parse()?, filter))
    }

    pub fn with_depth(mut self, depth: Depth) -> Self {
        self.depth = depth;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.variant == Variant::G1
            && (self.mover, self.move_kind, self.payoff)
                != (Mover::Fr, MoveKind::Element, Payoff::F)
        {
            return Err(ConfigError::G1Shape);
        }
        Ok(())
    }

    pub fn game_text(&self) -> String {
        format!("{},{},{}", self.mover, self.move_kind, self.payoff)
    }
}

/// A reply by II.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IIMove {
    Element(u64),
    Block(BTreeSet<u64>),
}

impl IIMove {
    pub fn block<I: IntoIterator<Item = u64>>(elems: I) -> Self {
        IIMove::Block(elems.into_iter().collect())
    }

    pub fn elements(&self) -> Vec<u64> {
        match self {
            IIMove::Element(n) => vec![*n],
            IIMove::Block(s) => s.iter().copied().collect(),
        }
    }

    pub fn least(&self) -> Option<u64> {
        match self {
            IIMove::Element(n) => Some(*n),
            IIMove::Block(s) => s.first().copied(),
        }
    }

    pub fn kind(&self) -> MoveKind {
        match self {
            IIMove::Element(_) => MoveKind::Element,
            IIMove::Block(_) => MoveKind::FiniteBlock,
        }
    }
}

/// Moves so far. When I is to move both lists have length `k`; when II is
/// to move `i_moves` is one longer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    pub seed: u64,
    pub i_moves: Vec<Subset>,
    pub ii_moves: Vec<IIMove>,
}

impl History {
    pub fn new(seed: u64) -> Self {
        History { seed, ..Default::default() }
    }

    /// Current round index.
    pub fn round(&self) -> usize {
        self.ii_moves.len()
    }

    /// I's move awaiting II's reply.
    pub fn current(&self) -> Option<&Subset> {
        (self.i_moves.len() > self.ii_moves.len()).then(|| self.i_moves.last()).flatten()
    }

    /// Every element II has played.
    pub fn used(&self) -> BTreeSet<u64> {
        self.ii_moves.iter().flat_map(IIMove::elements).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("no candidate move found below {bound}")]
    NoCandidate { bound: u64 },
    #[error("history left the tree at depth {depth}")]
    OffTree { depth: usize },
    #[error("strategy does not fit this game: {0}")]
    Incompatible(String),
    #[error("scripted input exhausted")]
    Exhausted,
    #[error(transparent)]
    Filter(#[from] FilterError),
}

pub trait StrategyI {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError>;

    fn describe(&self) -> String;

    /// Least `t` such that `[t, ∞)` lies inside every move this strategy
    /// makes after II histories of length `< max_len` with all entries
    /// `< below`, when the strategy can bound this symbolically.
    fn tail_bound(&self, _below: u64, _max_len: usize) -> Option<u64> {
        None
    }
}

pub trait StrategyII {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError>;

    fn describe(&self) -> String;

    /// `{next_move(h⌢X) : X ∈ basis}` when computable exactly; `h` is a
    /// history with I to move.
    fn image(&self, _h: &History, _filter: &FilterSpec) -> Option<Subset> {
        None
    }

    /// A basis-derived set `X` with `next_move(h⌢X) = n`.
    fn preimage(&self, _h: &History, _filter: &FilterSpec, _n: u64) -> Option<Subset> {
        None
    }

    /// The move depends only on the round index and I's current move.
    fn is_positional(&self) -> bool {
        false
    }

    /// Largest element of any reply in rounds `< max_len` when every move
    /// of I is a tail `[m, ∞)` with `m ≤ below`, when bounded symbolically.
    fn reply_bound(&self, _below: u64, _max_len: usize) -> Option<u64> {
        None
    }
}

impl<T: StrategyI + ?Sized> StrategyI for Box<T> {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        (**self).next_move(h)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn tail_bound(&self, below: u64, max_len: usize) -> Option<u64> {
        (**self).tail_bound(below, max_len)
    }
}

impl<T: StrategyII + ?Sized> StrategyII for Box<T> {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        (**self).next_move(h)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn image(&self, h: &History, f: &FilterSpec) -> Option<Subset> {
        (**self).image(h, f)
    }
    fn preimage(&self, h: &History, f: &FilterSpec, n: u64) -> Option<Subset> {
        (**self).preimage(h, f, n)
    }
    fn is_positional(&self) -> bool {
        (**self).is_positional()
    }
    fn reply_bound(&self, below: u64, max_len: usize) -> Option<u64> {
        (**self).reply_bound(below, max_len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("round {k}: cannot verify I's move at depth {depth}")]
    UnverifiableMove { k: usize, depth: u32 },
    #[error("round {k}: {player} emitted a malformed move: {detail}")]
    MalformedMove { k: usize, player: Player, detail: String },
    #[error("rounds must be at least 1")]
    ZeroRounds,
    #[error("this runner needs the {0} variant")]
    WrongVariant(&'static str),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

impl<S: StrategyII + ?Sized> StrategyII for &S {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        (**self).next_move(h)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn image(&self, h: &History, f: &FilterSpec) -> Option<Subset> {
        (**self).image(h, f)
    }
    fn preimage(&self, h: &History, f: &FilterSpec, n: u64) -> Option<Subset> {
        (**self).preimage(h, f, n)
    }
    fn is_positional(&self) -> bool {
        (**self).is_positional()
    }
    fn reply_bound(&self, below: u64, max_len: usize) -> Option<u64> {
        (**self).reply_bound(below, max_len)
    }
}

impl<S: StrategyI + ?Sized> StrategyI for &S {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        (**self).next_move(h)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn tail_bound(&self, below: u64, max_len: usize) -> Option<u64> {
        (**self).tail_bound(below, max_len)
    }
}
