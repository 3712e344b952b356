use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sigma;
use crate::filters::FilterSpec;
use crate::games::{History, IIMove, MoveKind, StrategyError, StrategyI, StrategyII};
use crate::setkit::{Subset, UpSet};
use crate::witnesses::{BlockFamily, Ladder, Partition, SeqRule, SetFamily};

/// How far past a round index interval searches look.
pub const LADDER_SEARCH: u64 = 256;

pub(super) fn wrap(kind: MoveKind, n: u64) -> IIMove {
    match kind {
        MoveKind::Element => IIMove::Element(n),
        MoveKind::FiniteBlock => IIMove::block([n]),
    }
}

pub(super) fn current(h: &History) -> Result<&Subset, StrategyError> {
    h.current()
        .ok_or_else(|| StrategyError::Incompatible("II asked to move before I".into()))
}

/// I plays the union of all blocks II has not touched yet.
#[derive(Debug, Clone)]
pub struct PartitionBlock {
    pub partition: Partition,
}

impl PartitionBlock {
    fn touched_union(&self, elems: impl Iterator<Item = u64>) -> Result<UpSet, StrategyError> {
        let mut out = BTreeSet::new();
        for n in elems {
            let b = self.partition.block_of(n).ok_or(StrategyError::NoCandidate { bound: n })?;
            let (lo, hi) = self.partition.block(b).expect("block_of returns defined blocks");
            out.extend(lo..hi);
        }
        Ok(UpSet::finite(out))
    }
}

impl StrategyI for PartitionBlock {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        Ok(self.touched_union(h.used().into_iter())?.complement().into())
    }

    fn describe(&self) -> String {
        format!("partition:{}", self.partition)
    }

    fn tail_bound(&self, below: u64, _max_len: usize) -> Option<u64> {
        if below == 0 {
            return Some(0);
        }
        let b = self.partition.block_of(below - 1)?;
        self.partition.boundary(b + 1)
    }
}

/// I plays `basis(0) ∩ … ∩ basis(k−1)`, minus `[0, k)` when `subtract`.
#[derive(Debug, Clone)]
pub struct ChainIntersect {
    pub filter: FilterSpec,
    pub subtract: bool,
}

impl StrategyI for ChainIntersect {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let k = h.round() as u64;
        let meet = self.filter.basis_meet(k);
        Ok(if self.subtract { meet.diff(&UpSet::interval(0, k).into()) } else { meet })
    }

    fn describe(&self) -> String {
        if self.subtract { "chain:subtract".into() } else { "chain".into() }
    }
}

/// I plays a fixed set every round.
#[derive(Debug, Clone)]
pub struct ConstantI(pub Subset);

impl StrategyI for ConstantI {
    fn next_move(&self, _h: &History) -> Result<Subset, StrategyError> {
        Ok(self.0.clone())
    }

    fn describe(&self) -> String {
        format!("const:{}", self.0)
    }

    fn tail_bound(&self, _below: u64, _max_len: usize) -> Option<u64> {
        self.0.as_up().and_then(UpSet::tail_start)
    }
}

/// Rules for I's cofinite moves `[m_k, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdRule {
    /// `m_k = rule(k)`
    Seq(SeqRule),
    /// One past the largest element II has played, plus `gap`.
    AboveLast { gap: u64 },
    /// `m_k = c`
    Fixed(u64),
}

#[derive(Debug, Clone)]
pub struct ThresholdI {
    pub rule: ThresholdRule,
}

impl ThresholdI {
    pub fn threshold(&self, h: &History) -> Result<u64, StrategyError> {
        let k = h.round() as u64;
        match &self.rule {
            ThresholdRule::Seq(r) => r.at(k).ok_or(StrategyError::Exhausted),
            ThresholdRule::AboveLast { gap } => {
                Ok(h.used().last().map_or(0, |&n| n + 1) + gap)
            }
            ThresholdRule::Fixed(c) => Ok(*c),
        }
    }
}

impl StrategyI for ThresholdI {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        Ok(UpSet::tail(self.threshold(h)?).into())
    }

    fn describe(&self) -> String {
        match &self.rule {
            ThresholdRule::Seq(r) => format!("tail:{r}"),
            ThresholdRule::AboveLast { gap } => format!("above:{gap}"),
            ThresholdRule::Fixed(c) => format!("tail:{c}"),
        }
    }
}

/// I replays a list of sets, then fails.
#[derive(Debug, Clone)]
pub struct ScriptedI(pub Vec<Subset>);

impl StrategyI for ScriptedI {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        self.0.get(h.round()).cloned().ok_or(StrategyError::Exhausted)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(Subset::descriptor).collect();
        format!("script:{}", parts.join("|"))
    }
}

/// II replays a list of replies, then fails.
#[derive(Debug, Clone)]
pub struct ScriptedII(pub Vec<IIMove>);

impl StrategyII for ScriptedII {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        self.0.get(h.round()).cloned().ok_or(StrategyError::Exhausted)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|m| m.elements().iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("script:{}", parts.join("|"))
    }
}

/// II plays the least unused element of `x ∩ X_k`.
#[derive(Debug, Clone)]
pub struct FixedSet {
    pub x: Subset,
    pub mode: MoveKind,
}

impl FixedSet {
    /// Least-element play: `x = ω`.
    pub fn least(mode: MoveKind) -> Self {
        FixedSet { x: Subset::omega(), mode }
    }

    fn available(&self, h: &History) -> Subset {
        self.x.diff(&UpSet::finite(h.used()).into())
    }
}

impl StrategyII for FixedSet {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let x = current(h)?;
        let cands = self.x.and(x);
        let n = cands
            .next_unused(0, &h.used())
            .ok_or(StrategyError::NoCandidate { bound: crate::setkit::GRID_SCAN_LIMIT })?;
        Ok(wrap(self.mode, n))
    }

    fn describe(&self) -> String {
        if self.x == Subset::omega() {
            "least".into()
        } else {
            format!("fixed:{}", self.x)
        }
    }

    /// Over the Fréchet basis `[m, ∞)` the reachable moves are exactly the
    /// unused members of `x`.
    fn image(&self, h: &History, filter: &FilterSpec) -> Option<Subset> {
        (*filter == FilterSpec::Frechet).then(|| self.available(h))
    }

    fn preimage(&self, h: &History, filter: &FilterSpec, n: u64) -> Option<Subset> {
        (*filter == FilterSpec::Frechet && self.available(h).contains(n))
            .then(|| UpSet::tail(n).into())
    }

    fn is_positional(&self) -> bool {
        false
    }
}

/// II answers round `k` from `X_{σ(k)} ∩ Y_k ∖ [0, k)`.
#[derive(Debug, Clone)]
pub struct SigmaDiag {
    pub family: SetFamily,
    /// Universal family for block games; `None` plays singletons.
    pub blocks: Option<BlockFamily>,
    pub mode: MoveKind,
}

impl SigmaDiag {
    pub fn elements(family: SetFamily, mode: MoveKind) -> Self {
        SigmaDiag { family, blocks: None, mode }
    }

    pub fn universal(blocks: BlockFamily) -> Self {
        SigmaDiag {
            family: SetFamily::List(vec![Subset::omega()]),
            blocks: Some(blocks),
            mode: MoveKind::FiniteBlock,
        }
    }

    fn reachable(&self, h: &History) -> Subset {
        let k = h.round() as u64;
        let below_k: Subset = UpSet::interval(0, k).into();
        self.family
            .member(sigma(k))
            .diff(&below_k)
            .diff(&UpSet::finite(h.used()).into())
    }
}

impl StrategyII for SigmaDiag {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let y = current(h)?;
        let k = h.round() as u64;
        if let Some(blocks) = &self.blocks {
            let ladder = blocks.ladder(sigma(k));
            let start = ladder.first_at_or_above(k).ok_or(StrategyError::NoCandidate { bound: k })?;
            for j in start..start + LADDER_SEARCH {
                let Some((a, b)) = ladder.interval(j) else { break };
                if (a..b).all(|m| y.contains(m)) {
                    return Ok(IIMove::block(a..b));
                }
            }
            return Err(StrategyError::NoCandidate { bound: LADDER_SEARCH });
        }
        let cands = self.family.member(sigma(k)).and(y);
        let n = cands
            .next_unused(k, &h.used())
            .ok_or(StrategyError::NoCandidate { bound: crate::setkit::GRID_SCAN_LIMIT })?;
        Ok(wrap(self.mode, n))
    }

    fn describe(&self) -> String {
        match &self.blocks {
            Some(_) => "sigma:universal".into(),
            None => format!("sigma:family={}", self.family),
        }
    }

    fn image(&self, h: &History, filter: &FilterSpec) -> Option<Subset> {
        (*filter == FilterSpec::Frechet && self.blocks.is_none()).then(|| self.reachable(h))
    }

    fn preimage(&self, h: &History, filter: &FilterSpec, n: u64) -> Option<Subset> {
        let ok = *filter == FilterSpec::Frechet && self.blocks.is_none() && self.reachable(h).contains(n);
        ok.then(|| UpSet::tail(n).into())
    }
}

/// II plays the first whole ladder interval beyond the round index that
/// fits inside I's move.
#[derive(Debug, Clone)]
pub struct IntervalStrategy {
    pub ladder: Ladder,
}

impl StrategyII for IntervalStrategy {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let x = current(h)?;
        let l = h.round() as u64;
        for k in l + 1..l + 1 + LADDER_SEARCH {
            let Some((a, b)) = self.ladder.interval(k) else { break };
            let fits = match x.as_up() {
                Some(u) => u.next_at_or_after(a) == Some(a) && {
                    let gap = u.complement().next_at_or_after(a);
                    gap.map_or(true, |g| g >= b)
                },
                None => (a..b).all(|m| x.contains(m)),
            };
            if fits {
                return Ok(IIMove::block(a..b));
            }
        }
        Err(StrategyError::NoCandidate { bound: LADDER_SEARCH })
    }

    fn describe(&self) -> String {
        format!("interval:{}", self.ladder)
    }

    fn is_positional(&self) -> bool {
        true
    }

    /// The reply to `[m, ∞)` in round `l` is the first interval past `l`
    /// starting at or above `m`, so `m = below` in the last round is worst.
    fn reply_bound(&self, below: u64, max_len: usize) -> Option<u64> {
        let k = self.ladder.first_at_or_above(below)?.max(max_len as u64);
        self.ladder.interval(k).map(|(_, b)| b - 1)
    }
}

fn play_rng(seed: u64, h: &History, salt: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&h.seed.to_le_bytes());
    key[16..24].copy_from_slice(&(h.round() as u64).to_le_bytes());
    key[24..].copy_from_slice(&(salt ^ h.i_moves.len() as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Largest basis index [`RandomI`] draws; dyadic basis sets have period `2ⁿ`.
pub const RANDOM_BASIS_CAP: u64 = 12;

/// Random cofinite tails, or random basis sets of a filter.
#[derive(Debug, Clone)]
pub struct RandomI {
    pub seed: u64,
    pub basis: Option<FilterSpec>,
}

impl StrategyI for RandomI {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let mut rng = play_rng(self.seed, h, 0x49);
        let k = h.round() as u64;
        Ok(match &self.basis {
            None => UpSet::tail(rng.gen_range(0..2 * k + 16)).into(),
            Some(f) => f.basis(rng.gen_range(0..(k + 4).min(RANDOM_BASIS_CAP))),
        })
    }

    fn describe(&self) -> String {
        match &self.basis {
            None => format!("random:seed={}", self.seed),
            Some(f) => format!("random:seed={};basis={f}", self.seed),
        }
    }
}

/// II picks a random element (or a random short block) of I's move.
#[derive(Debug, Clone)]
pub struct RandomII {
    pub seed: u64,
    pub mode: MoveKind,
}

impl StrategyII for RandomII {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let x = current(h)?;
        let mut rng = play_rng(self.seed, h, 0x4949);
        let from = x.next_at_or_after(0).ok_or(StrategyError::NoCandidate { bound: 0 })?;
        let pick = |rng: &mut ChaCha8Rng, from: u64| {
            x.next_at_or_after(from + rng.gen_range(0..24)).or_else(|| x.next_at_or_after(from))
        };
        match self.mode {
            MoveKind::Element => {
                let n = pick(&mut rng, from).ok_or(StrategyError::NoCandidate { bound: from })?;
                Ok(IIMove::Element(n))
            }
            MoveKind::FiniteBlock => {
                let len = rng.gen_range(1..=3);
                let mut s = BTreeSet::new();
                for _ in 0..len {
                    if let Some(n) = pick(&mut rng, from) {
                        s.insert(n);
                    }
                }
                Ok(IIMove::Block(s))
            }
        }
    }

    fn describe(&self) -> String {
        format!("random:seed={}", self.seed)
    }
}
