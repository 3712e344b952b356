use std::collections::BTreeSet;

use thiserror::Error;

use super::{Ladder, SeqRule, SetFamily};
use crate::filters::{FilterError, FilterSpec};
use crate::games::{History, IIMove, StrategyError, StrategyI, StrategyII};
use crate::setkit::UpSet;
use crate::strategies::ImageMode;
use crate::trees::{tree_from_strategy_ii, TreeBuildError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("strategy is not of the required shape: {0}")]
    Shape(String),
    #[error("history enumeration exceeded {0} histories")]
    Budget(usize),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Tree(#[from] TreeBuildError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Whose strategy the ladder is read from.
#[derive(Clone, Copy)]
pub enum LadderSource<'a> {
    /// I plays cofinite sets; a move counts as the start of its final tail.
    I(&'a dyn StrategyI),
    /// I's move `[m, ∞)` counts as `m`; a reply counts as its largest element.
    II(&'a dyn StrategyII),
}

/// All sequences of length `len` over `0..=top`.
fn sequences(len: usize, top: u64, budget: usize) -> Result<Vec<Vec<u64>>, ExtractError> {
    let count = (top as usize + 1).checked_pow(len as u32).filter(|&c| c <= budget);
    if count.is_none() {
        return Err(ExtractError::Budget(budget));
    }
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| (0..=top).map(move |m| [p.clone(), vec![m]].concat()))
            .collect();
    }
    Ok(out)
}

fn i_value(s: &dyn StrategyI, ns: &[u64]) -> Result<u64, ExtractError> {
    let mut h = History::new(0);
    for &n in ns {
        h.i_moves.push(s.next_move(&h)?);
        h.ii_moves.push(IIMove::Element(n));
    }
    let x = s.next_move(&h)?;
    let up = x.as_up().ok_or_else(|| ExtractError::Shape("I's move is not a set of naturals".into()))?;
    up.tail_start().ok_or_else(|| ExtractError::Shape(format!("I's move {x} is not cofinite")))
}

fn ii_value(s: &dyn StrategyII, ms: &[u64]) -> Result<u64, ExtractError> {
    let mut h = History::new(0);
    let mut top = 0;
    for &m in ms {
        h.i_moves.push(UpSet::tail(m).into());
        let r = s.next_move(&h)?;
        top = r.elements().into_iter().max().unwrap_or(0);
        h.ii_moves.push(r);
    }
    Ok(top)
}

/// `π_0 = 1`, `π_{k+1} = max{$(m_0, …, m_i) : i ≤ k, m_j ≤ π_k} + 1`,
/// raised to `π_k + 1` when the maximum does not exceed `π_k`.
///
/// Strategies exposing a tail or reply bound, or positional play (II), are
/// evaluated without enumerating histories; otherwise at most `budget`
/// histories are tried per level.
pub fn extract_pi_ladder(src: LadderSource<'_>, len: usize, budget: usize) -> Result<Ladder, ExtractError> {
    let mut pi = vec![1u64];
    while pi.len() < len {
        let k = pi.len() - 1;
        let top = pi[k];
        let mut best = match src {
            LadderSource::I(s) => match s.tail_bound(top + 1, k + 2) {
                Some(t) => t,
                None => {
                    let mut best = i_value(s, &[])?;
                    for i in 0..=k {
                        for ns in sequences(i + 1, top, budget)? {
                            best = best.max(i_value(s, &ns)?);
                        }
                    }
                    best
                }
            },
            LadderSource::II(s) if s.reply_bound(top, k + 1).is_some() => s.reply_bound(top, k + 1).unwrap(),
            LadderSource::II(s) if s.is_positional() => {
                let mut best = 0;
                for i in 0..=k {
                    for m in 0..=top {
                        let mut ms = vec![0; i];
                        ms.push(m);
                        best = best.max(ii_value(s, &ms)?);
                    }
                }
                best
            }
            LadderSource::II(s) => {
                let mut best = 0;
                for i in 0..=k {
                    for ms in sequences(i + 1, top, budget)? {
                        best = best.max(ii_value(s, &ms)?);
                    }
                }
                best
            }
        };
        best = (best + 1).max(top + 1);
        pi.push(best);
    }
    Ok(Ladder::unchecked(SeqRule::Explicit(pi)))
}

/// The sets `{$(h⌢X) : X ∈ basis}` over every materialized node of the
/// strategy tree of `s`, as a finite list family.
pub fn extract_diag_family(
    s: &dyn StrategyII,
    f: &FilterSpec,
    depth: usize,
    width: usize,
    mode: ImageMode,
) -> Result<SetFamily, ExtractError> {
    let t = tree_from_strategy_ii(s, f, depth, width, mode)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for node in t.remembered.keys() {
        let x = t.tree.label(node).map_err(|e| ExtractError::Shape(e.to_string()))?;
        if seen.insert(x.descriptor()) {
            out.push(x);
        }
    }
    Ok(SetFamily::List(out))
}

/// The filter generated by I's moves over II histories of length
/// `< depth` whose entries are the `width` least members of each move.
pub fn extract_generators(s: &dyn StrategyI, depth: usize, width: usize) -> Result<FilterSpec, ExtractError> {
    let mut gens: Vec<UpSet> = Vec::new();
    let mut frontier = vec![History::new(0)];
    for level in 0..depth {
        let mut next = Vec::new();
        for h in &frontier {
            let x = s.next_move(h)?;
            let up = x
                .as_up()
                .cloned()
                .ok_or_else(|| ExtractError::Shape("generators must be sets of naturals".into()))?;
            if !gens.contains(&up) {
                gens.push(up);
            }
            if level + 1 < depth {
                let mut from = 0;
                for _ in 0..width {
                    let Some(n) = x.next_at_or_after(from) else { break };
                    from = n + 1;
                    let mut h2 = h.clone();
                    h2.i_moves.push(x.clone());
                    h2.ii_moves.push(IIMove::Element(n));
                    next.push(h2);
                }
            }
        }
        frontier = next;
    }
    Ok(FilterSpec::finite_gen(gens)?)
}
