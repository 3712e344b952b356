//! An integer `m` stands for I's cofinite move `(m, ∞) = [m+1, ∞)`.

use std::collections::{BTreeSet, VecDeque};

use crate::games::{G1History, G1StrategyI, G1StrategyII, History, IIMove, StrategyError, StrategyI, StrategyII};
use crate::setkit::{Subset, UpSet};
use crate::witnesses::{claim_threshold, find_claim};

/// Bound on the claim search of the 𝔊₁ → block translation for II.
pub const CLAIM_BOUND: u64 = 8;

fn open_tail(m: u64) -> Subset {
    UpSet::tail(m + 1).into()
}

/// `m` with `(m, ∞) ⊆ x`, the least such when `x` is a tail past 0.
fn threshold(x: &Subset) -> Result<u64, StrategyError> {
    x.as_up()
        .and_then(UpSet::tail_start)
        .map(|t| t.saturating_sub(1))
        .ok_or_else(|| StrategyError::Incompatible(format!("move {x} is not cofinite")))
}

fn g1_run_i<S: G1StrategyI + ?Sized>(s: &S, ns: &[u64]) -> Result<Vec<u64>, StrategyError> {
    let mut h = G1History::default();
    for &n in ns {
        h.ms.push(s.next_m(&h)?);
        h.ns.push(n);
    }
    h.ms.push(s.next_m(&h)?);
    Ok(h.ms)
}

fn g1_reply<S: G1StrategyII + ?Sized>(s: &S, ms: &[u64]) -> Result<Vec<u64>, StrategyError> {
    let mut h = G1History::default();
    for &m in ms {
        h.ms.push(m);
        let n = s.next_n(&h)?;
        h.ns.push(n);
    }
    Ok(h.ns)
}

/// I in the block game: `s̄(s_0, …, s_i) = $(⋃_{j≤i} s_j)`.
pub struct BlockFromG1I<S> {
    pub base: S,
}

impl<S: G1StrategyI> StrategyI for BlockFromG1I<S> {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let union: BTreeSet<u64> = h.ii_moves.iter().flat_map(IIMove::elements).collect();
        let ns: Vec<u64> = union.into_iter().collect();
        let m = *g1_run_i(&self.base, &ns)?.last().unwrap();
        Ok(open_tail(m))
    }

    fn describe(&self) -> String {
        format!("fromg1({})", self.base.describe())
    }
}

/// I in 𝔊₁: regroups II's integers into `s_i = (m_{i−1}, m_i]` and a last
/// block above `m_{k−1}`, then asks the block strategy.
pub struct G1FromBlockI<S> {
    pub base: S,
}

impl<S: StrategyI> G1FromBlockI<S> {
    /// II's integers grouped by I's thresholds, one block per I move.
    pub fn blocks(ms: &[u64], ns: &[u64]) -> Vec<BTreeSet<u64>> {
        if ms.is_empty() {
            return vec![];
        }
        let mut out = Vec::with_capacity(ms.len() + 1);
        let mut lo = 0u64;
        for &m in ms {
            out.push(ns.iter().copied().filter(|&n| n >= lo && n <= m).collect());
            lo = m + 1;
        }
        out.push(ns.iter().copied().filter(|&n| n >= lo).collect());
        out
    }
}

impl<S: StrategyI> G1StrategyI for G1FromBlockI<S> {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError> {
        let mut bh = History::new(h.seed);
        for b in Self::blocks(&h.ms, &h.ns) {
            bh.i_moves.push(self.base.next_move(&bh)?);
            bh.ii_moves.push(IIMove::Block(b));
        }
        threshold(&self.base.next_move(&bh)?)
    }

    fn describe(&self) -> String {
        format!("toblock({})", self.base.describe())
    }
}

/// II in 𝔊₁: plays the elements of each block reply one per round,
/// ignoring I until the block is used up, then answers I's latest move.
pub struct G1FromBlockII<S> {
    pub base: S,
}

impl<S: StrategyII> G1FromBlockII<S> {
    /// The block play behind `ms` and the integers emitted so far.
    pub fn simulate(&self, ms: &[u64], seed: u64) -> Result<(History, Vec<u64>), StrategyError> {
        let mut bh = History::new(seed);
        let mut queue = VecDeque::new();
        let mut out = Vec::with_capacity(ms.len());
        for &m in ms {
            if queue.is_empty() {
                bh.i_moves.push(open_tail(m));
                let b = self.base.next_move(&bh)?;
                queue.extend(b.elements());
                bh.ii_moves.push(b);
            }
            out.push(queue.pop_front().ok_or(StrategyError::NoCandidate { bound: m })?);
        }
        Ok((bh, out))
    }
}

impl<S: StrategyII> G1StrategyII for G1FromBlockII<S> {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        let (_, out) = self.simulate(&h.ms, h.seed)?;
        out.last().copied().ok_or_else(|| StrategyError::Incompatible("II asked to move before I".into()))
    }

    fn describe(&self) -> String {
        format!("toblock({})", self.base.describe())
    }
}

/// II in the block game from a 𝔊₁ strategy: feeds I's threshold, raised
/// past the last claim's `n`, then the claim's `τ`, and answers with the
/// 𝔊₁ replies collected on the way.
pub struct BlockFromG1II<S> {
    pub base: S,
    pub bound: u64,
}

impl<S: G1StrategyII> BlockFromG1II<S> {
    /// I's 𝔊₁ integers and II's 𝔊₁ replies behind the block play.
    pub fn simulate(&self, thresholds: &[u64]) -> Result<(Vec<u64>, Vec<BTreeSet<u64>>), StrategyError> {
        let mut g = Vec::new();
        let mut blocks = Vec::with_capacity(thresholds.len());
        let mut nbar = claim_threshold(&self.base, &[], self.bound);
        for &m in thresholds {
            let mbar = nbar.map_or(m, |n| m.max(n + 1));
            g.push(mbar);
            let (tau, n) = find_claim(&self.base, &g, self.bound)
                .map_err(|_| StrategyError::Incompatible(format!("claim fails up to {}", self.bound)))?;
            g.extend(&tau);
            let replies = g1_reply(&self.base, &g)?;
            blocks.push(replies[replies.len() - 1 - tau.len()..].iter().copied().collect());
            nbar = Some(n);
        }
        Ok((g, blocks))
    }
}

impl<S: G1StrategyII> StrategyII for BlockFromG1II<S> {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let ts = h.i_moves.iter().map(threshold).collect::<Result<Vec<_>, _>>()?;
        let (_, mut blocks) = self.simulate(&ts)?;
        Ok(IIMove::Block(blocks.pop().ok_or_else(|| StrategyError::Incompatible("II asked to move before I".into()))?))
    }

    fn describe(&self) -> String {
        format!("fromg1({})", self.base.describe())
    }
}
