use std::io::{BufRead, Write};

use filter_games::games::{
    GameConfig, Header, History, IIMove, MoveKind, MoveValue, Mover, Player, StrategyI, StrategyII, Transcript,
    Variant,
};
use filter_games::strategies::{parse_strategy_i, parse_strategy_ii};
use filter_games::Subset;
use serde_json::json;

use crate::args::{PlayArgs, Side};
use crate::common::{certify, game_config, usage, CliError, Output, Status};

enum Machine {
    I(Box<dyn StrategyI>),
    II(Box<dyn StrategyII>),
}

fn accepts(c: &GameConfig, x: &Subset) -> Option<bool> {
    match c.mover {
        Mover::Fr => Some(x.is_cofinite()),
        Mover::AllInfinite => Some(x.is_infinite()),
        Mover::F => c.filter.classify(x, c.depth).ok()?.in_f(),
        Mover::Fplus => c.filter.classify(x, c.depth).ok()?.in_fplus(),
    }
}

fn fits(x: &Subset, reply: &IIMove) -> bool {
    match reply {
        IIMove::Element(n) => x.contains(*n),
        IIMove::Block(s) => !s.is_empty() && s.iter().all(|&n| x.contains(n)),
    }
}

fn parse_reply(line: &str, kind: MoveKind) -> Result<IIMove, String> {
    let ns = line
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| format!("`{s}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match (kind, ns.as_slice()) {
        (MoveKind::Element, [n]) => Ok(IIMove::Element(*n)),
        (MoveKind::Element, _) => Err("enter one integer".into()),
        (MoveKind::FiniteBlock, []) => Err("enter at least one integer".into()),
        (MoveKind::FiniteBlock, _) => Ok(IIMove::block(ns)),
    }
}

/// Prompts until `check` accepts a line. Rejected lines count as
/// violations; `None` means end of input.
fn ask<T>(
    input: &mut dyn BufRead,
    prompt: &mut dyn Write,
    label: &str,
    violations: &mut usize,
    check: impl Fn(&str) -> Result<T, String>,
) -> Option<T> {
    loop {
        let _ = write!(prompt, "{label}> ");
        let _ = prompt.flush();
        let mut line = String::new();
        match input.read_line(&mut line) {
            Ok(0) | Err(_) => return None,
            Ok(_) => {}
        }
        match check(line.trim()) {
            Ok(v) => return Some(v),
            Err(e) => {
                *violations += 1;
                let _ = writeln!(prompt, "illegal move: {e}; try again");
            }
        }
    }
}

pub fn play(
    a: PlayArgs,
    input: &mut dyn BufRead,
    prompt: &mut dyn Write,
    out: &mut Output,
) -> Result<Status, CliError> {
    let config = game_config(&a.game, "fr,elem,fplus")?;
    if config.variant != Variant::Standard {
        return Err(usage("play supports the standard variant"));
    }
    let machine = match a.human {
        Side::II => Machine::I(parse_strategy_i(a.i.as_deref().ok_or_else(|| usage("play needs --I"))?, &config)?),
        Side::I => Machine::II(parse_strategy_ii(a.ii.as_deref().ok_or_else(|| usage("play needs --II"))?, &config)?),
    };
    let (strategy_i, strategy_ii) = match &machine {
        Machine::I(s) => (s.describe(), "human".to_string()),
        Machine::II(s) => ("human".to_string(), s.describe()),
    };
    let header = Header { config: config.clone(), seed: a.game.seed, rounds: a.game.rounds, strategy_i, strategy_ii };
    let mut t = Transcript::new(header);
    let mut h = History::new(a.game.seed);
    let mut violations = 0;
    let mut aborted = false;
    for k in 0..a.game.rounds {
        let x = match &machine {
            Machine::I(s) => match s.next_move(&h) {
                Ok(x) => x,
                Err(e) => {
                    t.push(Player::I, None, false, Some(e.to_string()));
                    break;
                }
            },
            Machine::II(_) => {
                let check = |line: &str| {
                    let x: Subset = line.parse().map_err(|e| format!("{e}"))?;
                    match accepts(&config, &x) {
                        Some(true) => Ok(x),
                        Some(false) => Err(format!("{x} is not in {}", config.mover)),
                        None => Err(format!("cannot decide {x} at depth {}", config.depth.get())),
                    }
                };
                match ask(input, prompt, &format!("round {k} I"), &mut violations, check) {
                    Some(x) => x,
                    None => {
                        aborted = true;
                        break;
                    }
                }
            }
        };
        if accepts(&config, &x) != Some(true) {
            let reason = format!("move is not in {}", config.mover);
            t.push(Player::I, Some(MoveValue::Set(x)), false, Some(reason));
            break;
        }
        t.push(Player::I, Some(MoveValue::Set(x.clone())), true, None);
        h.i_moves.push(x.clone());

        let reply = match &machine {
            Machine::II(s) => match s.next_move(&h) {
                Ok(r) => {
                    let _ = writeln!(prompt, "II plays {:?}", r.elements());
                    r
                }
                Err(e) => {
                    t.push(Player::II, None, false, Some(e.to_string()));
                    break;
                }
            },
            Machine::I(_) => {
                let _ = writeln!(prompt, "I plays {x}");
                let check = |line: &str| {
                    let r = parse_reply(line, config.move_kind)?;
                    if fits(&x, &r) {
                        Ok(r)
                    } else {
                        Err(format!("{:?} is not inside {x}", r.elements()))
                    }
                };
                match ask(input, prompt, &format!("round {k} II"), &mut violations, check) {
                    Some(r) => r,
                    None => {
                        aborted = true;
                        break;
                    }
                }
            }
        };
        let legal = reply.kind() == config.move_kind && fits(&x, &reply);
        t.push(Player::II, Some(MoveValue::from(&reply)), legal, (!legal).then(|| "move is not inside I's set".into()));
        if !legal {
            break;
        }
        h.ii_moves.push(reply);
    }
    out.transcript(&t);
    if aborted {
        out.line(&json!({ "aborted": "end of input", "violations": violations, "rounds_played": t.rounds_played() }));
        return Ok(Status::Refuted);
    }
    let (mut summary, status) = certify(&t, &a.certifier)?;
    summary["violations"] = json!(violations);
    out.line(&summary);
    Ok(status)
}
