use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Branch, FTree, Node, TreeError};
use crate::setkit::{Subset, UpSet};

/// Supplies `Y` with `Y ∖ n_{k+1} ⊆ A_k` for every computed `k`.
pub trait PseudoIntersection {
    fn pseudo(&self, chain: &[Subset], ns: &[u64]) -> Subset;
}

/// Supplies an increasing `K` and a set `Z` missing every interval
/// `[n_k, n_{k+1})` with `k ∈ K`.
pub trait IntervalMiss {
    fn miss(&self, y: &Subset, ns: &[u64]) -> (Vec<usize>, Subset);
}

/// Returns a fixed set regardless of the chain.
pub struct FixedPseudo(pub Subset);

impl PseudoIntersection for FixedPseudo {
    fn pseudo(&self, _chain: &[Subset], _ns: &[u64]) -> Subset {
        self.0.clone()
    }
}

/// `K = {k : k ≡ parity (mod 2)}` and `Z = ω` minus those intervals.
pub struct FixedIntervalMiss {
    pub parity: usize,
}

impl IntervalMiss for FixedIntervalMiss {
    fn miss(&self, _y: &Subset, ns: &[u64]) -> (Vec<usize>, Subset) {
        let ks: Vec<usize> = (0..ns.len().saturating_sub(1)).filter(|k| k % 2 == self.parity).collect();
        let holes = UpSet::finite(ks.iter().flat_map(|&k| ns[k]..ns[k + 1]));
        (ks, holes.complement().into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NmpError {
    #[error("chain set A_{0} has no element past n_{0}")]
    EmptyChain(usize),
    #[error("pseudo-intersection fails at index {0}")]
    PseudoFails(usize),
    #[error("interval-miss witness meets interval {0}")]
    MissFails(usize),
    #[error("interval-miss witness gave only {0} indices")]
    MissShort(usize),
    #[error("block {0} is not inside its node's label")]
    Containment(usize),
    #[error("node enumeration exceeded {0} nodes")]
    Budget(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NmpStep {
    pub l: usize,
    pub k: usize,
    pub block: Vec<u64>,
    pub label: String,
    pub inside_chain: bool,
    pub inside_label: bool,
}

const NODE_BUDGET: usize = 1 << 14;

/// `A_{k+1} = A_k ∩ ⋂ {X_s̄ : |s̄| ≤ k+1, s_j ⊆ A_j ∩ [0, n_{k+1}]}`.
fn next_chain(tree: &FTree, chain: &[Subset], n: u64) -> Result<Subset, NmpError> {
    let k = chain.len() - 1;
    let mut acc = chain[k].clone();
    if tree.depth_label(0).is_some() {
        for d in 0..=k + 1 {
            acc = acc.and(&tree.depth_label(d).unwrap());
        }
        return Ok(acc);
    }
    let pools: Vec<Vec<u64>> = chain.iter().map(|a| a.elements_below(n + 1)).collect();
    let mut frontier: Vec<Node> = vec![vec![]];
    let mut seen = 0;
    for d in 0..=k + 1 {
        let mut next = Vec::new();
        for node in &frontier {
            acc = acc.and(&tree.label(node)?);
            seen += 1;
            if seen > NODE_BUDGET {
                return Err(NmpError::Budget(NODE_BUDGET));
            }
            if d <= k {
                let pool = &pools[d];
                if pool.len() > 12 {
                    return Err(NmpError::Budget(NODE_BUDGET));
                }
                for mask in 0u32..1 << pool.len() {
                    let s: BTreeSet<u64> =
                        pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                    let mut child = node.clone();
                    child.push(s);
                    next.push(child);
                }
            }
        }
        frontier = next;
    }
    Ok(acc)
}

/// Builds `blocks` entries of a branch whose union is the oracle's
/// pseudo-intersection, checking every step of the construction.
pub fn nmp_branch(
    tree: &FTree,
    p: &dyn PseudoIntersection,
    m: &dyn IntervalMiss,
    blocks: usize,
) -> Result<(Branch, Vec<NmpStep>), NmpError> {
    let levels = 2 * blocks + 4;
    let mut chain = vec![tree.label(&[])?];
    let mut ns = vec![0u64];
    for k in 0..levels {
        let n = chain[k].next_at_or_after(ns[k] + 1).ok_or(NmpError::EmptyChain(k))?;
        ns.push(n);
        chain.push(next_chain(tree, &chain, n)?);
    }
    let y = p.pseudo(&chain, &ns);
    for k in 0..levels {
        let tail: Subset = UpSet::interval(0, ns[k + 1]).into();
        if !y.diff(&tail).is_subset(&chain[k]) {
            return Err(NmpError::PseudoFails(k));
        }
    }
    let (ks, z) = m.miss(&y, &ns);
    for &k in &ks {
        if k + 1 < ns.len() && z.next_at_or_after(ns[k]).map_or(false, |v| v < ns[k + 1]) {
            return Err(NmpError::MissFails(k));
        }
    }
    let ks: Vec<usize> = ks.into_iter().filter(|&k| k + 1 < ns.len()).collect();
    if ks.len() < blocks + 1 {
        return Err(NmpError::MissShort(ks.len()));
    }
    let y2 = y.and(&z);
    let mut path: Node = Vec::new();
    let mut steps = Vec::new();
    for l in 0..blocks {
        let (lo, hi) = (ns[ks[l]], ns[ks[l + 1]]);
        let block: BTreeSet<u64> = (lo..hi).filter(|&v| y2.contains(v)).collect();
        let label = tree.label(&path)?;
        let inside_label = block.iter().all(|&v| label.contains(v));
        let inside_chain = block.iter().all(|&v| chain[ks[l]].contains(v));
        steps.push(NmpStep {
            l,
            k: ks[l],
            block: block.iter().copied().collect(),
            label: label.descriptor(),
            inside_chain,
            inside_label,
        });
        if !inside_label {
            return Err(NmpError::Containment(l));
        }
        path.push(block);
    }
    let union = super::support(&path);
    Ok((Branch { path, union, union_set: Some(y2) }, steps))
}
