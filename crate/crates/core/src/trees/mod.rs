//! ℱ-trees and ℱ-trees of finite sets with rule-based, lazily evaluated
//! labels.
//!
//! A node is a finite sequence of finite sets; element trees use
//! singletons. The successors of a node `s̄` are `s̄⌢a` for `a` inside the
//! label `X_s̄`.

mod nmp;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::{Depth, FilterError, FilterSpec, Region};
use crate::setkit::{Subset, UpSet};
use crate::witnesses::{Ladder, RuleError};

pub use nmp::{nmp_branch, FixedIntervalMiss, FixedPseudo, IntervalMiss, NmpError, NmpStep, PseudoIntersection};
pub use search::{
    bounded_branch_search, tree_from_strategy_ii, BranchCertifier, BranchReport, BranchStatus,
    StrategyTree, TreeBuildError,
};

pub type Node = Vec<BTreeSet<u64>>;

/// A finite branch prefix and, when expressible, a set describing the
/// union of its infinite continuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub path: Node,
    pub union: BTreeSet<u64>,
    pub union_set: Option<Subset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Elements,
    FiniteSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeFamily {
    F,
    Fplus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Labeler {
    /// Level `n` is labelled `basis(n)`.
    Chain(FilterSpec),
    /// `[π_{k+1}, ∞)` for the least `k` with the node's support below `π_k`.
    Interval(Ladder),
    Constant(Subset),
    /// Explicit labels; unknown nodes fall back to `default`.
    Materialized { labels: BTreeMap<Node, Subset>, default: Option<Subset> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {0:?} is not in the tree")]
    OffTree(Node),
    #[error("label at {node:?} classifies as {region:?}, outside the declared family")]
    LabelFamily { node: Node, region: Region },
    #[error("cannot parse tree spec `{0}`")]
    Spec(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTree {
    pub kind: NodeKind,
    pub family: TreeFamily,
    pub labeler: Labeler,
    pub filter: FilterSpec,
}

/// Union of a node's entries.
pub fn support(node: &[BTreeSet<u64>]) -> BTreeSet<u64> {
    node.iter().flatten().copied().collect()
}

impl FTree {
    pub fn chain(f: FilterSpec) -> Self {
        FTree {
            kind: NodeKind::FiniteSets,
            family: TreeFamily::F,
            labeler: Labeler::Chain(f.clone()),
            filter: f,
        }
    }

    pub fn interval(ladder: Ladder) -> Self {
        FTree {
            kind: NodeKind::FiniteSets,
            family: TreeFamily::F,
            labeler: Labeler::Interval(ladder),
            filter: FilterSpec::Frechet,
        }
    }

    pub fn constant(x: Subset, filter: FilterSpec) -> Self {
        FTree {
            kind: NodeKind::Elements,
            family: TreeFamily::F,
            labeler: Labeler::Constant(x),
            filter,
        }
    }

    /// The label when it only depends on the depth.
    pub fn depth_label(&self, depth: usize) -> Option<Subset> {
        match &self.labeler {
            Labeler::Chain(f) => Some(f.basis(depth as u64)),
            Labeler::Constant(x) => Some(x.clone()),
            _ => None,
        }
    }

    pub fn label(&self, node: &[BTreeSet<u64>]) -> Result<Subset, TreeError> {
        match &self.labeler {
            Labeler::Chain(f) => Ok(f.basis(node.len() as u64)),
            Labeler::Constant(x) => Ok(x.clone()),
            Labeler::Interval(ladder) => {
                let sup = support(node);
                let need = sup.last().map_or(0, |&m| m + 1);
                let k = (0u64..)
                    .map_while(|k| ladder.at(k).map(|p| (k, p)))
                    .find(|&(_, p)| p >= need)
                    .map(|(k, _)| k)
                    .ok_or_else(|| TreeError::OffTree(node.to_vec()))?;
                let start = ladder.at(k + 1).ok_or_else(|| TreeError::OffTree(node.to_vec()))?;
                Ok(UpSet::tail(start).into())
            }
            Labeler::Materialized { labels, default } => labels
                .get(node)
                .or(default.as_ref())
                .cloned()
                .ok_or_else(|| TreeError::OffTree(node.to_vec())),
        }
    }

    /// Whether `node⌢entry` is a successor of `node`.
    pub fn is_child(&self, node: &[BTreeSet<u64>], entry: &BTreeSet<u64>) -> Result<bool, TreeError> {
        if self.kind == NodeKind::Elements && entry.len() != 1 {
            return Ok(false);
        }
        let x = self.label(node)?;
        Ok(entry.iter().all(|&n| x.contains(n)))
    }

    /// Whether every entry of `path` is a successor of its prefix.
    pub fn contains_path(&self, path: &[BTreeSet<u64>]) -> Result<bool, TreeError> {
        for i in 0..path.len() {
            if !self.is_child(&path[..i], &path[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The first `width` successor entries of `node`: singletons of the
    /// label's least elements.
    pub fn children(&self, node: &[BTreeSet<u64>], width: usize) -> Result<Vec<BTreeSet<u64>>, TreeError> {
        let x = self.label(node)?;
        let mut out = Vec::new();
        let mut from = 0;
        while out.len() < width {
            let Some(n) = x.next_at_or_after(from) else { break };
            out.push(BTreeSet::from([n]));
            from = n + 1;
        }
        Ok(out)
    }

    fn family_ok(&self, region: Region) -> Option<bool> {
        match self.family {
            TreeFamily::F => region.in_f(),
            TreeFamily::Fplus => region.in_fplus(),
        }
    }

    /// Classifies every label on nodes up to `depth` (children limited to
    /// `width`) against the declared family. Returns the number of labels
    /// checked.
    pub fn check_labels(&self, depth: usize, width: usize, at: Depth) -> Result<usize, TreeError> {
        let mut frontier: Vec<Node> = vec![vec![]];
        let mut checked = 0;
        for level in 0..=depth {
            let mut next = Vec::new();
            for node in &frontier {
                let region = self.filter.classify(&self.label(node)?, at)?;
                checked += 1;
                if self.family_ok(region) != Some(true) {
                    return Err(TreeError::LabelFamily { node: node.clone(), region });
                }
                if level < depth {
                    for c in self.children(node, width)? {
                        let mut n = node.clone();
                        n.push(c);
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        Ok(checked)
    }
}

/// Tree spec line: `chain:<filter>`, `interval:pi=<rule>`, `const:<set>`,
/// or `fromstrategy:<strategy spec>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Chain(FilterSpec),
    Interval(Ladder),
    Constant(Subset),
    FromStrategy(String),
}

impl FromStr for TreeSpec {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let line = s
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| TreeError::Spec(s.into()))?;
        if let Some(f) = line.strip_prefix("chain:") {
            return Ok(TreeSpec::Chain(f.parse()?));
        }
        if let Some(r) = line.strip_prefix("interval:pi=") {
            return Ok(TreeSpec::Interval(Ladder::new(r.parse()?)?));
        }
        if let Some(x) = line.strip_prefix("const:") {
            return Ok(TreeSpec::Constant(x.parse().map_err(|_| TreeError::Spec(line.into()))?));
        }
        if let Some(st) = line.strip_prefix("fromstrategy:") {
            return Ok(TreeSpec::FromStrategy(st.into()));
        }
        Err(TreeError::Spec(line.into()))
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Chain(fs) => write!(f, "chain:{fs}"),
            TreeSpec::Interval(l) => write!(f, "interval:{l}"),
            TreeSpec::Constant(x) => write!(f, "const:{x}"),
            TreeSpec::FromStrategy(s) => write!(f, "fromstrategy:{s}"),
        }
    }
}
