use super::{
    EngineError, GameConfig, Header, History, IIMove, MoveValue, Mover, Player, StrategyError,
    StrategyI, StrategyII, Transcript, Variant,
};
use crate::setkit::Subset;

/// Whether `x ∈ 𝒳`; `Unknown` verdicts are an error.
pub(crate) fn mover_accepts(config: &GameConfig, x: &Subset, k: usize) -> Result<bool, EngineError> {
    let verdict = match config.mover {
        Mover::Fr => Some(x.is_cofinite()),
        Mover::AllInfinite => Some(x.is_infinite()),
        Mover::F => config.filter.classify(x, config.depth)?.in_f(),
        Mover::Fplus => config.filter.classify(x, config.depth)?.in_fplus(),
    };
    verdict.ok_or(EngineError::UnverifiableMove { k, depth: config.depth.get() })
}

/// `n ∈ X` for element games, `∅ ≠ s ⊆ X` for block games.
pub(crate) fn reply_fits(x: &Subset, reply: &IIMove) -> bool {
    match reply {
        IIMove::Element(n) => x.contains(*n),
        IIMove::Block(s) => !s.is_empty() && s.iter().all(|&n| x.contains(n)),
    }
}

/// Plays `rounds` rounds. An illegal move or a strategy failure ends the
/// play; the offender is recorded and loses by forfeit.
pub fn run_bounded(
    config: &GameConfig,
    s_i: &dyn StrategyI,
    s_ii: &dyn StrategyII,
    rounds: usize,
    seed: u64,
) -> Result<Transcript, EngineError> {
    config.validate()?;
    if config.variant != Variant::Standard {
        return Err(EngineError::WrongVariant("standard"));
    }
    if rounds == 0 {
        return Err(EngineError::ZeroRounds);
    }
    let mut t = Transcript::new(Header {
        config: config.clone(),
        seed,
        rounds,
        strategy_i: s_i.describe(),
        strategy_ii: s_ii.describe(),
    });
    let mut h = History::new(seed);
    for k in 0..rounds {
        let x = match s_i.next_move(&h) {
            Ok(x) => x,
            Err(StrategyError::OffTree { depth }) if k > 0 => {
                // II's previous reply left I's tree
                let last = t.records.iter_mut().rev().find(|r| r.player == Player::II).expect("k > 0");
                last.legal = false;
                last.reason = Some(format!("move left the tree at depth {depth}"));
                break;
            }
            Err(e) => {
                t.push(Player::I, None, false, Some(e.to_string()));
                break;
            }
        };
        if !mover_accepts(config, &x, k)? {
            let reason = format!("move is not in {}", config.mover);
            t.push(Player::I, Some(MoveValue::Set(x)), false, Some(reason));
            break;
        }
        t.push(Player::I, Some(MoveValue::Set(x.clone())), true, None);
        h.i_moves.push(x.clone());

        let reply = match s_ii.next_move(&h) {
            Ok(r) => r,
            Err(e) => {
                t.push(Player::II, None, false, Some(e.to_string()));
                break;
            }
        };
        if reply.kind() != config.move_kind {
            return Err(EngineError::MalformedMove {
                k,
                player: Player::II,
                detail: format!("expected a {} move", config.move_kind),
            });
        }
        if !reply_fits(&x, &reply) {
            t.push(Player::II, Some((&reply).into()), false, Some("reply outside I's set".into()));
            break;
        }
        t.push(Player::II, Some((&reply).into()), true, None);
        h.ii_moves.push(reply);
    }
    Ok(t)
}
