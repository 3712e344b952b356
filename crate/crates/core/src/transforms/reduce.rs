use crate::games::{History, IIMove, StrategyError, StrategyI, StrategyII};
use crate::setkit::Subset;

/// Block history as seen by a block strategy whose element-game twin
/// answered with least elements.
fn block_history<S: StrategyII>(base: &S, h: &History) -> Result<History, StrategyError> {
    let mut bh = History::new(h.seed);
    for (k, x) in h.i_moves.iter().enumerate() {
        bh.i_moves.push(x.clone());
        if k < h.ii_moves.len() {
            let b = base.next_move(&bh)?;
            bh.ii_moves.push(b);
        }
    }
    Ok(bh)
}

/// II in the element game plays the least element of what the block
/// strategy would play.
pub struct SingletonReduce<S> {
    pub base: S,
}

impl<S: StrategyII> StrategyII for SingletonReduce<S> {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let bh = block_history(&self.base, h)?;
        let b = self.base.next_move(&bh)?;
        b.least().map(IIMove::Element).ok_or(StrategyError::NoCandidate { bound: 0 })
    }

    fn describe(&self) -> String {
        format!("reduce({})", self.base.describe())
    }
}

/// II in the block game plays singletons of an element strategy.
pub struct SingletonEmbed<S> {
    pub base: S,
}

impl<S: StrategyII> StrategyII for SingletonEmbed<S> {
    fn next_move(&self, h: &History) -> Result<IIMove, StrategyError> {
        let mut eh = h.clone();
        eh.ii_moves = h.ii_moves.iter().map(|m| IIMove::Element(m.least().unwrap_or(0))).collect();
        match self.base.next_move(&eh)? {
            IIMove::Element(n) => Ok(IIMove::block([n])),
            b @ IIMove::Block(_) => Ok(b),
        }
    }

    fn describe(&self) -> String {
        format!("embed({})", self.base.describe())
    }
}

/// An I strategy written for block histories, used in the element game:
/// II's elements are presented as singletons.
pub struct ElementViewI<S> {
    pub base: S,
}

impl<S: StrategyI> StrategyI for ElementViewI<S> {
    fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
        let mut bh = h.clone();
        bh.ii_moves = h.ii_moves.iter().map(|m| IIMove::block(m.elements())).collect();
        self.base.next_move(&bh)
    }

    fn describe(&self) -> String {
        self.base.describe()
    }
}
