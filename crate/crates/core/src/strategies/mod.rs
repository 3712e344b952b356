//! Explicit strategies behind the deterministic strategy contract, plus
//! scripted and seeded-random adversaries and scripted refutation drivers.

mod basic;
mod refute;
mod spec;
mod tree;

use serde::{Deserialize, Serialize};

use crate::filters::FilterSpec;
use crate::games::{History, StrategyII};
use crate::setkit::{Subset, UpSet};

pub use basic::{
    ChainIntersect, ConstantI, FixedSet, IntervalStrategy, PartitionBlock, RandomI, RandomII,
    ScriptedI, ScriptedII, SigmaDiag, ThresholdI, ThresholdRule, LADDER_SEARCH, RANDOM_BASIS_CAP,
};
pub use refute::{
    pi_ladder_split, ramsey_construct, LadderSplit, RamseyPlay, RamseyStep, RefuteError,
};
pub use spec::{
    build_tree, parse_g1_strategy_i, parse_g1_strategy_ii, parse_strategy_i, parse_strategy_ii, SpecError,
};
pub use tree::{TreeStrategyI, TreeStrategyII};

/// `σ(k)` = number of trailing one bits of `k + 1`. Every value has
/// infinitely many preimages.
pub fn sigma(k: u64) -> u64 {
    (k + 1).trailing_ones() as u64
}

/// How the image of a strategy over a filter basis is computed: from the
/// strategy's own symbolic image, or by running it on `basis(0..M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImageMode {
    Exact,
    Approx(u64),
}

fn with_move(h: &History, x: Subset) -> History {
    let mut h2 = h.clone();
    h2.i_moves.push(x);
    h2
}

/// `{s(h⌢X) : X ∈ basis}` under `mode`.
pub fn image_under(s: &dyn StrategyII, h: &History, f: &FilterSpec, mode: ImageMode) -> Option<Subset> {
    match mode {
        ImageMode::Exact => s.image(h, f),
        ImageMode::Approx(m) => {
            let hits = (0..m).filter_map(|i| s.next_move(&with_move(h, f.basis(i))).ok()?.least());
            Some(UpSet::finite(hits).into())
        }
    }
}

/// A basis set `X` with `s(h⌢X) = n`, under `mode`.
pub fn preimage_under(
    s: &dyn StrategyII,
    h: &History,
    f: &FilterSpec,
    n: u64,
    mode: ImageMode,
) -> Option<Subset> {
    match mode {
        ImageMode::Exact => s.preimage(h, f, n),
        ImageMode::Approx(m) => (0..m)
            .map(|i| f.basis(i))
            .find(|x| s.next_move(&with_move(h, x.clone())).ok().and_then(|r| r.least()) == Some(n)),
    }
}
