use std::collections::BTreeSet;

use serde::Serialize;

use super::TransformError;
use crate::filters::FilterSpec;
use crate::games::{GameConfig, Header, History, IIMove, MoveKind, MoveValue, Mover, Payoff, Player, StrategyI, Transcript};

/// Two plays against the same strategy for I, II's replies on each board
/// being intervals that close the gap left by the other.
#[derive(Debug, Clone, Serialize)]
pub struct TwoBoard {
    #[serde(skip)]
    pub a: Transcript,
    #[serde(skip)]
    pub b: Transcript,
    pub a_set: BTreeSet<u64>,
    pub b_set: BTreeSet<u64>,
    /// I's first threshold.
    pub start: u64,
    /// Largest element played on either board.
    pub top: u64,
    /// Elements of `[start, top]` on neither board.
    pub gaps: Vec<u64>,
    /// Per board, the replies that raised the board's maximum.
    pub fresh: [usize; 2],
}

impl TwoBoard {
    pub fn covered(&self) -> bool {
        self.gaps.is_empty()
    }
}

struct Board {
    h: History,
    t: Transcript,
    top: Option<u64>,
    fresh: usize,
}

impl Board {
    fn new(config: &GameConfig, s: &dyn StrategyI, rounds: usize) -> Self {
        let header = Header {
            config: config.clone(),
            seed: 0,
            rounds,
            strategy_i: s.describe(),
            strategy_ii: "two-board".into(),
        };
        Board { h: History::new(0), t: Transcript::new(header), top: None, fresh: 0 }
    }

    /// I's next threshold on this board.
    fn ask(&mut self, s: &dyn StrategyI) -> Result<u64, TransformError> {
        let k = self.h.round();
        let x = s.next_move(&self.h).map_err(|e| TransformError::NotCofinite(format!("move {k}: {e}")))?;
        let m = x
            .as_up()
            .and_then(|u| u.tail_start())
            .ok_or_else(|| TransformError::NotCofinite(format!("move {k} is {x}")))?;
        self.t.push(Player::I, Some(MoveValue::Set(x.clone())), true, None);
        self.h.i_moves.push(x);
        Ok(m)
    }

    fn reply(&mut self, block: BTreeSet<u64>) {
        let hi = *block.last().expect("nonempty block");
        if self.top.is_none_or(|t| hi > t) {
            self.fresh += 1;
            self.top = Some(hi);
        }
        self.t.push(Player::II, Some(MoveValue::List(block.iter().copied().collect())), true, None);
        self.h.ii_moves.push(IIMove::Block(block));
    }
}

/// Drives two plays of 𝔊(Fr, [ω]^{<ω}, ℱ⁺) for `rounds` rounds each.
///
/// Board A answers I's first threshold `m_0` with `{m_0}`. From then on
/// each board answers its own threshold `t` with `[t, u]`, where `u` is
/// the other board's newest threshold, raised past everything played.
pub fn two_board_pair(filter: &FilterSpec, s: &dyn StrategyI, rounds: usize) -> Result<TwoBoard, TransformError> {
    let config = GameConfig::new(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, filter.clone());
    let rounds = rounds.max(1);
    let mut a = Board::new(&config, s, rounds);
    let mut b = Board::new(&config, s, rounds);
    let start = a.ask(s)?;
    a.reply(BTreeSet::from([start]));
    let mut top = start;
    let mut own = [0, 0];
    let mut newest = [0, 0];
    if rounds > 1 {
        own[0] = a.ask(s)?;
        newest[0] = own[0];
    }
    own[1] = b.ask(s)?;
    newest[1] = own[1];
    // board 1 then board 0, each answering its pending threshold
    let mut turn = 1;
    loop {
        let board = if turn == 0 { &mut a } else { &mut b };
        if board.h.ii_moves.len() >= rounds {
            break;
        }
        let hi = newest[1 - turn].max(top + 1);
        board.reply((own[turn]..=hi).collect());
        top = hi;
        if board.h.ii_moves.len() < rounds {
            own[turn] = board.ask(s)?;
            newest[turn] = own[turn];
        }
        turn = 1 - turn;
    }
    let gaps = (start..=top).filter(|n| !a.h.used().contains(n) && !b.h.used().contains(n)).collect();
    let set = |bd: &Board| bd.h.ii_moves.iter().flat_map(IIMove::elements).collect::<BTreeSet<u64>>();
    Ok(TwoBoard {
        a_set: set(&a),
        b_set: set(&b),
        start,
        top,
        gaps,
        fresh: [a.fresh, b.fresh],
        a: a.t,
        b: b.t,
    })
}
