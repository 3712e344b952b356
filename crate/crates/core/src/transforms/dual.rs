use serde::Serialize;

use super::{DualDirection, TransformError};
use crate::filters::FilterSpec;
use crate::games::{
    History, IIMove, MoveKind, Player, StrategyError, StrategyI, StrategyII, Transcript,
};
use crate::setkit::Subset;
use crate::strategies::{image_under, preimage_under, ImageMode};

/// Remembered sets are drawn from the tails `[m, ∞)`.
const REMEMBER: FilterSpec = FilterSpec::Frechet;

/// The play of the source game that a dual play simulates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowPlay {
    /// I's moves in the source game.
    pub sets: Vec<Subset>,
    /// II's moves in the source game.
    pub moves: Vec<u64>,
    /// Every shadow move is legal and the shadow replies equal the dual
    /// play's replies.
    pub consistent: bool,
    pub approx: bool,
}

/// I's strategy built from a strategy `$` for II: play
/// `{$(X_0, …, X_{k−1}, X) : X}` and remember some `X_k` with
/// `$(X_0, …, X_k) = n_k`.
pub struct DualizedI<S> {
    pub base: S,
    pub mode: ImageMode,
}

impl<S: StrategyII> DualizedI<S> {
    fn remembered(&self, ns: &[u64]) -> Result<Vec<Subset>, StrategyError> {
        let mut h = History::new(0);
        for (j, &n) in ns.iter().enumerate() {
            let x = preimage_under(&self.base, &h, &REMEMBER, n, self.mode).ok_or_else(|| {
                StrategyError::Incompatible(match self.mode {
                    ImageMode::Approx(m) => format!("no remembered set for n_{j} = {n} among {m} basis sets"),
                    ImageMode::Exact => format!("base strategy has no preimage for n_{j} = {n}"),
                })
            })?;
            h.i_moves.push(x);
            h.ii_moves.push(IIMove::Element(n));
        }
        Ok(h.i_moves)
    }

    /// Rebuilds the source play behind a finished dual play.
    pub fn shadow(&self, t: &Transcript) -> Result<ShadowPlay, StrategyError> {
        let ns = t.ints(Player::II);
        let sets = self.remembered(&ns)?;
        let mut h = History::new(0);
        let mut consistent = true;
        for (x, &n) in sets.iter().zip(&ns) {
            h.i_moves.push(x.clone());
            let r = self.base.next_move(&h)?;
            consistent &= r.least() == Some(n) && x.contains(n);
            h.ii_moves.push(r);
        }
        Ok(ShadowPlay { sets, moves: ns, consistent, approx: matches!(self.mode, ImageMode::Approx(_)) })
    }
}

impl<S: StrategyII> StrategyI for DualizedI<S> {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let ns: Vec<u64> = h.ii_moves.iter().filter_map(IIMove::least).collect();
        let mut sh = History::new(h.seed);
        sh.i_moves = self.remembered(&ns)?;
        sh.ii_moves = ns.iter().map(|&n| IIMove::Element(n)).collect();
        image_under(&self.base, &sh, &REMEMBER, self.mode)
            .ok_or_else(|| StrategyError::Incompatible("base strategy has no exact image".into()))
    }

    fn describe(&self) -> String {
        match self.mode {
            ImageMode::Exact => format!("dual({})", self.base.describe()),
            ImageMode::Approx(m) => format!("dual({};approx={m})", self.base.describe()),
        }
    }
}

/// II's strategy built from a strategy `$` for I: against `X_k` play the
/// least unused element of `$(n_0, …, n_{k−1}) ∩ X_k`.
pub struct DualizedII<S> {
    pub base: S,
}

impl<S: StrategyI> DualizedII<S> {
    fn shadow_sets(&self, ns: &[u64], seed: u64) -> Result<Vec<Subset>, StrategyError> {
        let mut sh = History::new(seed);
        for &n in ns {
            sh.i_moves.push(self.base.next_move(&sh)?);
            sh.ii_moves.push(IIMove::Element(n));
        }
        sh.i_moves.push(self.base.next_move(&sh)?);
        Ok(sh.i_moves)
    }

    pub fn shadow(&self, t: &Transcript) -> Result<ShadowPlay, StrategyError> {
        let ns = t.ints(Player::II);
        let mut sets = self.shadow_sets(&ns, t.header.seed)?;
        sets.truncate(ns.len());
        let consistent = sets.iter().zip(&ns).all(|(y, &n)| y.contains(n));
        Ok(ShadowPlay { sets, moves: ns, consistent, approx: false })
    }
}

impl<S: StrategyI> StrategyII for DualizedII<S> {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let x = h
            .current()
            .ok_or_else(|| StrategyError::Incompatible("II asked to move before I".into()))?;
        let ns: Vec<u64> = h.ii_moves.iter().filter_map(IIMove::least).collect();
        let y = self.shadow_sets(&ns, h.seed)?.pop().expect("at least one shadow move");
        let n = y
            .and(x)
            .next_unused(0, &h.used())
            .ok_or(StrategyError::NoCandidate { bound: crate::setkit::GRID_SCAN_LIMIT })?;
        Ok(IIMove::Element(n))
    }

    fn describe(&self) -> String {
        format!("dual({})", self.base.describe())
    }
}

pub enum Dualized<'a> {
    I(DualizedI<&'a dyn StrategyII>),
    II(DualizedII<&'a dyn StrategyI>),
}

/// Either base strategy, tagged by side.
pub enum Base<'a> {
    I(&'a dyn StrategyI),
    II(&'a dyn StrategyII),
}

/// The dual strategy for the opposite side of the dual game.
pub fn dualize<'a>(base: Base<'a>, dir: &DualDirection, mode: ImageMode) -> Result<Dualized<'a>, TransformError> {
    if dir.source.move_kind != MoveKind::Element {
        return Err(TransformError::Shape {
            game: dir.source.game_text(),
            detail: "duality is only available for element moves".into(),
        });
    }
    match (base, dir.side) {
        (Base::II(s), Player::II) => Ok(Dualized::I(DualizedI { base: s, mode })),
        (Base::I(s), Player::I) => Ok(Dualized::II(DualizedII { base: s })),
        _ => Err(TransformError::Shape { game: dir.source.game_text(), detail: "base strategy is for the other side".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{run_bounded, GameConfig, Mover, Payoff};
    use crate::setkit::UpSet;
    use crate::strategies::{FixedSet, RandomII};
    use crate::transforms::dual_config;

    #[test]
    fn fixed_evens_dual_plays_evens() {
        let src = GameConfig::new(Mover::Fr, MoveKind::Element, Payoff::Fcomp, FilterSpec::Frechet);
        let s = FixedSet { x: UpSet::evens().into(), mode: MoveKind::Element };
        let d = DualizedI { base: &s, mode: ImageMode::Exact };
        assert_eq!(d.next_move(&History::new(0)).unwrap(), UpSet::evens().into());
        let t = run_bounded(&dual_config(&src), &d, &RandomII { seed: 4, mode: MoveKind::Element }, 20, 0).unwrap();
        assert!(t.is_legal());
        let sh = d.shadow(&t).unwrap();
        assert!(sh.consistent);
        assert!(sh.moves.iter().all(|n| n % 2 == 0));
    }

    #[test]
    fn least_image_exact_and_approx() {
        let s = FixedSet::least(MoveKind::Element);
        let exact = DualizedI { base: &s, mode: ImageMode::Exact };
        assert_eq!(exact.next_move(&History::new(0)).unwrap(), Subset::omega());
        let approx = DualizedI { base: &s, mode: ImageMode::Approx(10) };
        assert_eq!(approx.next_move(&History::new(0)).unwrap(), UpSet::interval(0, 10).into());
    }
}
