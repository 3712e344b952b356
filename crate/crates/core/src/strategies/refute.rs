use serde::Serialize;
use thiserror::Error;

use super::basic::ScriptedII;
use crate::filters::{Depth, FilterError, Region};
use crate::games::{run_bounded, EngineError, GameConfig, IIMove, MoveKind, StrategyI, Transcript};
use crate::setkit::{Subset, UpSet};
use crate::witnesses::{
    check_selector, extract_pi_ladder, ExtractError, Ladder, LadderSource, Partition, SeqRule, WitnessReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefuteError {
    #[error("selector witness fails its check: {0:?}")]
    Selector(Box<WitnessReport>),
    #[error("extracted ladder {0} is not arithmetic; the split halves have no finite description")]
    NotArithmetic(String),
    #[error("neither half of the split is positive: {0:?}")]
    NoParity([Region; 2]),
    #[error("pseudo-intersection witness is not almost inside I's move at round {0}")]
    PseudoWitness(usize),
    #[error("selective witness is not a subset of the pseudo-intersection")]
    SelectiveWitness,
    #[error("witness outcome classifies as {0:?}, outside the filter")]
    Outcome(Region),
    #[error("scripted play was illegal at round {0}")]
    Illegal(usize),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

fn script(kind: MoveKind, ns: &[u64]) -> ScriptedII {
    ScriptedII(
        ns.iter()
            .map(|&n| match kind {
                MoveKind::Element => IIMove::Element(n),
                MoveKind::FiniteBlock => IIMove::block([n]),
            })
            .collect(),
    )
}

fn checked_play(config: &GameConfig, s: &dyn StrategyI, ns: &[u64]) -> Result<Transcript, RefuteError> {
    let t = run_bounded(config, s, &script(config.move_kind, ns), ns.len(), 0)?;
    if let Some(v) = t.first_violation() {
        return Err(RefuteError::Illegal(v.k));
    }
    Ok(t)
}

/// A play defeating I's strategy along one parity class of ladder
/// intervals.
#[derive(Debug, Clone, Serialize)]
pub struct LadderSplit {
    #[serde(serialize_with = "crate::strategies::refute::ser_display")]
    pub ladder: Ladder,
    pub parity: usize,
    pub halves: [Subset; 2],
    pub regions: [Region; 2],
    /// The chosen half minus `[0, π_1)`.
    pub outcome: Subset,
    #[serde(skip)]
    pub transcript: Transcript,
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `(a, d)` when the materialized terms are `a + d·k`.
fn fit_arithmetic(l: &Ladder) -> Option<(u64, u64)> {
    if let Some(ad) = l.arithmetic() {
        return Some(ad);
    }
    let SeqRule::Explicit(v) = l.rule() else { return None };
    let (a, b) = (*v.first()?, *v.get(1)?);
    let d = b.checked_sub(a).filter(|&d| d > 0)?;
    v.iter().enumerate().all(|(k, &p)| p == a + d * k as u64).then_some((a, d))
}

/// `x ∩ ⋃_k [π_{2k+i}, π_{2k+i+1})` for an arithmetic ladder.
fn half(x: &Subset, a: u64, d: u64, i: u64) -> Subset {
    let stripes = (0..d).fold(UpSet::empty(), |acc, j| acc.or(&UpSet::residue(2 * d, a + i * d + j)));
    x.and(&stripes.and(&UpSet::tail(a)).into())
}

/// Extracts the ladder of `s` (`len` terms), checks `selector` against its
/// blocks, splits it by interval parity and plays the first `rounds`
/// elements of a positive half.
pub fn pi_ladder_split(
    config: &GameConfig,
    s: &dyn StrategyI,
    selector: &Subset,
    len: usize,
    rounds: usize,
    budget: usize,
) -> Result<LadderSplit, RefuteError> {
    let ladder = extract_pi_ladder(LadderSource::I(s), len.max(3), budget)?;
    let SeqRule::Explicit(pi) = ladder.rule().clone() else { unreachable!("extraction is explicit") };
    let blocks = Partition::new(SeqRule::Explicit([vec![0], pi.clone()].concat()))
        .map_err(|e| RefuteError::NotArithmetic(e.to_string()))?;
    let report = check_selector(selector, &blocks, *pi.last().unwrap());
    if !report.verdict.is_verified() {
        return Err(RefuteError::Selector(Box::new(report)));
    }
    let (a, d) = fit_arithmetic(&ladder).ok_or_else(|| RefuteError::NotArithmetic(ladder.to_string()))?;
    let halves = [half(selector, a, d, 0), half(selector, a, d, 1)];
    let depth = config.depth;
    let regions = [config.filter.classify(&halves[0], depth)?, config.filter.classify(&halves[1], depth)?];
    let parity = (0..2).find(|&i| regions[i].in_fplus() == Some(true)).ok_or(RefuteError::NoParity(regions))?;
    let outcome = halves[parity].diff(&UpSet::interval(0, pi[1]).into());
    let mut ns = Vec::with_capacity(rounds);
    let mut from = 0;
    while ns.len() < rounds {
        let Some(n) = outcome.next_at_or_after(from) else { break };
        ns.push(n);
        from = n + 1;
    }
    let transcript = checked_play(config, s, &ns)?;
    Ok(LadderSplit { ladder, parity, halves, regions, outcome, transcript })
}

#[derive(Debug, Clone, Serialize)]
pub struct RamseyStep {
    pub k: usize,
    pub n: u64,
    /// Least `t` with `Y ∖ t ⊆ X_k`.
    pub threshold: u64,
    pub inside: bool,
}

/// A play whose outcome is the selective witness `Y′`.
#[derive(Debug, Clone, Serialize)]
pub struct RamseyPlay {
    pub outcome: Subset,
    pub region: Region,
    pub steps: Vec<RamseyStep>,
    #[serde(skip)]
    pub transcript: Transcript,
}

/// Plays the elements of `Y′ = q(y)` in order against I's strategy.
///
/// `y` must be almost inside every move of `s` (checked on each move that
/// occurs), and `q` thins it to a set the play realizes.
pub fn ramsey_construct(
    config: &GameConfig,
    s: &dyn StrategyI,
    y: &Subset,
    q: &dyn Fn(&Subset) -> Subset,
    rounds: usize,
) -> Result<RamseyPlay, RefuteError> {
    let y2 = q(y);
    if !y2.is_subset(y) {
        return Err(RefuteError::SelectiveWitness);
    }
    let mut ns = Vec::with_capacity(rounds);
    let mut from = 0;
    while ns.len() < rounds {
        let Some(n) = y2.next_at_or_after(from) else { break };
        ns.push(n);
        from = n + 1;
    }
    let transcript = run_bounded(config, s, &script(config.move_kind, &ns), ns.len(), 0)?;
    let mut steps = Vec::new();
    for (k, x) in transcript.i_sets().iter().enumerate() {
        if !y.almost_subset(x) {
            return Err(RefuteError::PseudoWitness(k));
        }
        let outside = y.diff(x);
        let mut threshold = 0;
        while let Some(m) = outside.next_at_or_after(threshold) {
            threshold = m + 1;
        }
        let Some(&n) = ns.get(k) else { break };
        steps.push(RamseyStep { k, n, threshold, inside: x.contains(n) });
    }
    if let Some(v) = transcript.first_violation() {
        return Err(RefuteError::Illegal(v.k));
    }
    let region = config.filter.classify(&y2, Depth::default())?;
    if region.in_f() != Some(true) {
        return Err(RefuteError::Outcome(region));
    }
    Ok(RamseyPlay { outcome: y2, region, steps, transcript })
}
