use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{support, Branch, FTree, Labeler, Node, NodeKind, TreeError, TreeFamily};
use crate::filters::{Depth, FilterSpec};
use crate::games::{History, IIMove, StrategyError, StrategyII};
use crate::setkit::{Subset, UpSet};
use crate::strategies::{image_under, preimage_under, ImageMode};
use crate::witnesses::Ladder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchCertifier {
    /// Classifies the union of the canonical continuation when the tree's
    /// labels make it symbolic.
    Union,
    /// Marks ladder intervals the prefix skips entirely; a prefix with a
    /// skipped interval between every pair of consecutive entries is
    /// certified out and not extended.
    IntervalGaps(Ladder),
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchStatus {
    CertifiedIn,
    CertifiedOut,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchReport {
    pub branch: Branch,
    pub status: BranchStatus,
    pub marks: Vec<u64>,
}

/// Canonical continuation above `max`: every later label element.
fn continuation(tree: &FTree, path: &Node) -> Option<Subset> {
    let above = path.iter().flatten().max().map_or(0, |m| m + 1);
    let rest = match &tree.labeler {
        Labeler::Constant(x) => x.clone(),
        Labeler::Chain(FilterSpec::Frechet) => Subset::omega(),
        _ => return None,
    };
    let prefix: Subset = UpSet::finite(support(path)).into();
    Some(prefix.or(&rest.diff(&UpSet::interval(0, above).into())))
}

fn skipped(ladder: &Ladder, union: &BTreeSet<u64>) -> Vec<u64> {
    let Some(&top) = union.last() else { return vec![] };
    let mut out = Vec::new();
    for k in 0u64.. {
        let Some((lo, hi)) = ladder.interval(k) else { break };
        if hi > top {
            break;
        }
        if union.range(lo..hi).next().is_none() {
            out.push(k);
        }
    }
    out
}

fn judge(tree: &FTree, c: &BranchCertifier, b: &Branch) -> (BranchStatus, Vec<u64>) {
    match c {
        BranchCertifier::None => (BranchStatus::Open, vec![]),
        BranchCertifier::Union => {
            let Some(u) = &b.union_set else { return (BranchStatus::Open, vec![]) };
            let in_f = tree.filter.classify(u, Depth::default()).ok().and_then(|r| r.in_f());
            let status = match in_f {
                Some(true) => BranchStatus::CertifiedIn,
                Some(false) => BranchStatus::CertifiedOut,
                None => BranchStatus::Open,
            };
            (status, vec![])
        }
        BranchCertifier::IntervalGaps(ladder) => {
            let marks = skipped(ladder, &b.union);
            let entries: Vec<u64> = b.path.iter().filter_map(|e| e.iter().next().copied()).collect();
            let separated = entries.len() >= 2
                && entries.windows(2).all(|w| {
                    marks.iter().any(|&k| ladder.interval(k).is_some_and(|(lo, hi)| w[0] < lo && hi <= w[1]))
                });
            let status = if separated { BranchStatus::CertifiedOut } else { BranchStatus::Open };
            (status, marks)
        }
    }
}

/// Enumerates branch prefixes of length `depth` (children limited to
/// `width`), stopping early on prefixes the certifier places outside.
pub fn bounded_branch_search(
    tree: &FTree,
    depth: usize,
    width: usize,
    certifier: &BranchCertifier,
) -> Result<Vec<BranchReport>, TreeError> {
    let mut out = Vec::new();
    let mut frontier: Vec<Node> = vec![vec![]];
    for level in 1..=depth.max(1) {
        let mut next = Vec::new();
        for node in &frontier {
            for c in tree.children(node, width)? {
                let mut path = node.clone();
                path.push(c);
                let branch = Branch { union: support(&path), union_set: continuation(tree, &path), path };
                let (status, marks) = judge(tree, certifier, &branch);
                if level == depth.max(1) || status == BranchStatus::CertifiedOut {
                    out.push(BranchReport { branch, status, marks });
                } else {
                    next.push(branch.path);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeBuildError {
    #[error("strategy has no exact image at node {0:?}")]
    NoImage(Node),
    #[error("no basis set among the first {bound} yields move {n} at node {node:?}")]
    Preimage { node: Node, n: u64, bound: u64 },
    #[error("replay of {node:?} diverged at move {at}")]
    Replay { node: Node, at: usize },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// An ℱ⁺-labelled element tree read off a strategy for II, with the basis
/// sets I must have played to reach each node.
#[derive(Debug, Clone)]
pub struct StrategyTree {
    pub tree: FTree,
    pub remembered: BTreeMap<Node, Vec<Subset>>,
    pub approx: bool,
}

fn history_for(remembered: &[Subset], path: &Node) -> History {
    History {
        seed: 0,
        i_moves: remembered.to_vec(),
        ii_moves: path.iter().map(|e| IIMove::Element(*e.iter().next().unwrap())).collect(),
    }
}

/// Label of `s̄⌢n` is the image of `s` after the remembered basis sets
/// for `s̄⌢n`; children are the `width` least label elements.
pub fn tree_from_strategy_ii(
    s: &dyn StrategyII,
    f: &FilterSpec,
    depth: usize,
    width: usize,
    mode: ImageMode,
) -> Result<StrategyTree, TreeBuildError> {
    let mut labels = BTreeMap::new();
    let mut remembered: BTreeMap<Node, Vec<Subset>> = BTreeMap::new();
    remembered.insert(vec![], vec![]);
    let mut frontier: Vec<Node> = vec![vec![]];
    for level in 0..depth.max(1) {
        let mut next = Vec::new();
        for node in &frontier {
            let xs = remembered[node].clone();
            let h = history_for(&xs, node);
            let label = image_under(s, &h, f, mode).ok_or_else(|| TreeBuildError::NoImage(node.clone()))?;
            if level + 1 < depth {
                let mut from = 0;
                for _ in 0..width {
                    let Some(n) = label.next_at_or_after(from) else { break };
                    from = n + 1;
                    let x = preimage_under(s, &h, f, n, mode).ok_or_else(|| TreeBuildError::Preimage {
                        node: node.clone(),
                        n,
                        bound: match mode {
                            ImageMode::Approx(m) => m,
                            ImageMode::Exact => 0,
                        },
                    })?;
                    let mut child = node.clone();
                    child.push(BTreeSet::from([n]));
                    let mut cx = xs.clone();
                    cx.push(x);
                    remembered.insert(child.clone(), cx);
                    next.push(child);
                }
            }
            labels.insert(node.clone(), label);
        }
        frontier = next;
    }
    let tree = FTree {
        kind: NodeKind::Elements,
        family: TreeFamily::Fplus,
        labeler: Labeler::Materialized { labels, default: None },
        filter: f.clone(),
    };
    Ok(StrategyTree { tree, remembered, approx: matches!(mode, ImageMode::Approx(_)) })
}

impl StrategyTree {
    /// Replays every materialized node through `s` against its remembered
    /// sets. Returns the number of nodes checked.
    pub fn replay_audit(&self, s: &dyn StrategyII) -> Result<usize, TreeBuildError> {
        for (node, xs) in &self.remembered {
            let mut h = History::new(0);
            for (i, x) in xs.iter().enumerate() {
                h.i_moves.push(x.clone());
                let mv = s.next_move(&h)?;
                let want = node[i].iter().next().copied();
                if mv.least() != want || mv.elements().len() != 1 {
                    return Err(TreeBuildError::Replay { node: node.clone(), at: i });
                }
                h.ii_moves.push(mv);
            }
        }
        Ok(self.remembered.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::MoveKind;
    use crate::strategies::{sigma, FixedSet, SigmaDiag};
    use crate::witnesses::{column, SeqRule, SetFamily};

    #[test]
    fn depth_one_is_the_root_image() {
        let s = FixedSet { x: UpSet::evens().into(), mode: MoveKind::Element };
        let t = tree_from_strategy_ii(&s, &FilterSpec::Frechet, 1, 1, ImageMode::Exact).unwrap();
        assert_eq!(t.remembered.len(), 1);
        assert_eq!(t.tree.label(&[]).unwrap(), UpSet::evens().into());
    }

    #[test]
    fn sigma_tree_root_is_first_column_and_replays() {
        let s = SigmaDiag::elements(SetFamily::Columns, MoveKind::Element);
        let t = tree_from_strategy_ii(&s, &FilterSpec::Frechet, 4, 2, ImageMode::Exact).unwrap();
        assert_eq!(t.tree.label(&[]).unwrap(), column(sigma(0)));
        assert_eq!(t.replay_audit(&s).unwrap(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn union_certifier_on_constant_tree() {
        let t = FTree::constant(UpSet::evens().into(), FilterSpec::Frechet);
        let r = bounded_branch_search(&t, 2, 2, &BranchCertifier::Union).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|b| b.status == BranchStatus::CertifiedOut && b.branch.path.len() == 1));
        let t = FTree::constant(Subset::omega(), FilterSpec::Frechet);
        let r = bounded_branch_search(&t, 2, 2, &BranchCertifier::Union).unwrap();
        assert!(r.iter().all(|b| b.status == BranchStatus::CertifiedIn));
    }

    #[test]
    fn interval_gaps_prune() {
        let ladder = Ladder::new(SeqRule::Pow2).unwrap();
        let t = FTree::interval(ladder.clone());
        let r = bounded_branch_search(&t, 3, 1, &BranchCertifier::IntervalGaps(ladder)).unwrap();
        assert!(!r.is_empty());
        assert!(r.iter().all(|b| b.branch.path.len() <= 3));
    }
}
