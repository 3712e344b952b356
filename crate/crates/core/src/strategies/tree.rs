use std::collections::BTreeSet;

use super::basic::{current, wrap};
use crate::games::{History, IIMove, MoveKind, StrategyError, StrategyI, StrategyII};
use crate::setkit::Subset;
use crate::trees::{FTree, Node, TreeError};

fn node_of(h: &History) -> Node {
    h.ii_moves.iter().map(|m| m.elements().into_iter().collect::<BTreeSet<u64>>()).collect()
}

fn tree_err(e: TreeError, depth: usize) -> StrategyError {
    match e {
        TreeError::OffTree(_) => StrategyError::OffTree { depth },
        other => StrategyError::Incompatible(other.to_string()),
    }
}

/// I plays the label of the node spelled by II's moves so far.
#[derive(Debug, Clone)]
pub struct TreeStrategyI {
    pub tree: FTree,
}

impl StrategyI for TreeStrategyI {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let node = node_of(h);
        for d in 0..node.len() {
            let ok = self.tree.is_child(&node[..d], &node[d]).map_err(|e| tree_err(e, d))?;
            if !ok {
                return Err(StrategyError::OffTree { depth: d });
            }
        }
        self.tree.label(&node).map_err(|e| tree_err(e, node.len()))
    }

    fn describe(&self) -> String {
        "tree:I".into()
    }
}

/// II walks the tree, taking the least label element inside I's move.
#[derive(Debug, Clone)]
pub struct TreeStrategyII {
    pub tree: FTree,
    pub mode: MoveKind,
}

impl StrategyII for TreeStrategyII {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let x = current(h)?;
        let node = node_of(h);
        let label = self.tree.label(&node).map_err(|e| tree_err(e, node.len()))?;
        let n = label
            .and(x)
            .next_unused(0, &h.used())
            .ok_or(StrategyError::NoCandidate { bound: crate::setkit::GRID_SCAN_LIMIT })?;
        Ok(wrap(self.mode, n))
    }

    fn describe(&self) -> String {
        "tree:II".into()
    }
}
