//! Strategy-to-strategy transformations: duality between 𝔊(ℱ, ω, 𝒵) and
//! 𝔊(ℱ⁺, ω, 𝒵ᶜ), singleton reduction for block games, translators between
//! 𝔊₁(ℱ) and 𝔊(Fr, [ω]^{<ω}, ℱ), and the two-board driver.

mod dual;
mod g1;
mod reduce;
mod two_board;

use thiserror::Error;

use crate::games::{EngineError, GameConfig, Mover, Player};

pub use dual::{dualize, Base, Dualized, DualizedI, DualizedII, ShadowPlay};
pub use g1::{BlockFromG1I, BlockFromG1II, G1FromBlockI, G1FromBlockII, CLAIM_BOUND};
pub use reduce::{ElementViewI, SingletonEmbed, SingletonReduce};
pub use two_board::{two_board_pair, TwoBoard};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("transform does not apply to game {game}: {detail}")]
    Shape { game: String, detail: String },
    #[error("I's move {0} is not cofinite")]
    NotCofinite(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The mover of the dual game: ℱ ↔ ℱ⁺ and Fr ↔ [ω]^ω.
pub fn dual_mover(m: Mover) -> Mover {
    match m {
        Mover::F => Mover::Fplus,
        Mover::Fplus => Mover::F,
        Mover::Fr => Mover::AllInfinite,
        Mover::AllInfinite => Mover::Fr,
    }
}

/// 𝔊(𝒳, ω, 𝒵) ↦ 𝔊(𝒳⁺, ω, 𝒵ᶜ).
pub fn dual_config(c: &GameConfig) -> GameConfig {
    GameConfig { mover: dual_mover(c.mover), payoff: c.payoff.complement(), ..c.clone() }
}

/// One of the four duality directions: the side whose strategy is given,
/// and the game it is given for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDirection {
    pub side: Player,
    pub source: GameConfig,
}

impl DualDirection {
    pub fn target(&self) -> (Player, GameConfig) {
        (self.side.other(), dual_config(&self.source))
    }
}
