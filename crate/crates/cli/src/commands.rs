use std::collections::BTreeSet;
use std::fs;

use filter_games::filters::Depth;
use filter_games::games::{
    run_bounded, run_g1, GameConfig, MoveKind, MoveRecord, Mover, Payoff, Player, StrategyI, StrategyII, Transcript,
    Variant,
};
use filter_games::strategies::{
    build_tree, parse_g1_strategy_i, parse_g1_strategy_ii, parse_strategy_i, parse_strategy_ii, ImageMode, RandomI,
    RandomII,
};
use filter_games::transforms::{
    dualize, two_board_pair, Base, BlockFromG1I, BlockFromG1II, DualDirection, Dualized, G1FromBlockI, G1FromBlockII,
    CLAIM_BOUND,
};
use filter_games::trees::{bounded_branch_search, BranchCertifier, Labeler};
use filter_games::witnesses::{
    check_claim, check_diag, check_selector, check_talagrand, BlockFamily, DiagFamily, DiagMode, Ladder, Partition,
    SetFamily,
};
use filter_games::{CardClass, Subset, UpSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    BranchCertifierArg, ModeArg, OracleArgs, Property, ReplayArgs, SimulateArgs, TransformArgs, TransformKind, TreeArgs,
    VariantArg, WitnessArgs,
};
use crate::common::{certify, filter, g1_verdict, game_config, usage, CliError, Output, Status};

pub fn simulate(a: SimulateArgs, out: &mut Output) -> Result<Status, CliError> {
    let config = game_config(&a.game, "fr,elem,fplus")?;
    if config.variant == Variant::G1 {
        let (i, ii) = (parse_g1_strategy_i(&a.i)?, parse_g1_strategy_ii(&a.ii)?);
        let t = run_g1(&config.filter, &*i, &*ii, a.game.rounds, a.game.seed)?;
        let (summary, status) = g1_verdict(&t);
        out.transcript(&t);
        out.line(&summary);
        return Ok(status);
    }
    let (i, ii) = (parse_strategy_i(&a.i, &config)?, parse_strategy_ii(&a.ii, &config)?);
    let t = run_bounded(&config, &*i, &*ii, a.game.rounds, a.game.seed)?;
    let (summary, status) = certify(&t, &a.certifier)?;
    out.transcript(&t);
    out.line(&summary);
    Ok(status)
}

pub fn transform(a: TransformArgs, out: &mut Output) -> Result<Status, CliError> {
    if a.game.variant == VariantArg::G1 {
        return Err(usage("transform picks the game variant from --kind"));
    }
    let f = filter(&a.game.filter)?;
    let (rounds, seed) = (a.game.rounds, a.game.seed);
    if rounds == 0 {
        return Err(usage("--rounds must be at least 1"));
    }
    let block = |payoff| GameConfig::new(Mover::Fr, MoveKind::FiniteBlock, payoff, f.clone());
    let both = || match (&a.i, &a.ii) {
        (Some(i), Some(ii)) => Ok((i.as_str(), ii.as_str())),
        _ => Err(usage("this transform needs both --I and --II")),
    };
    match a.kind {
        TransformKind::Dual => {
            let source = game_config(&a.game, "f,elem,fcomp")?;
            let mode = a.approx.map_or(ImageMode::Exact, ImageMode::Approx);
            let side = match (&a.i, &a.ii) {
                (Some(_), None) => Player::I,
                (None, Some(_)) => Player::II,
                _ => return Err(usage("dual needs exactly one of --I and --II")),
            };
            let dir = DualDirection { side, source };
            let (_, target) = dir.target();
            let (t, shadow) = match side {
                Player::II => {
                    let base = parse_strategy_ii(a.ii.as_deref().unwrap(), &dir.source)?;
                    let Dualized::I(dual) = dualize(Base::II(&*base), &dir, mode)? else { unreachable!() };
                    let opp = RandomII { seed, mode: target.move_kind };
                    let t = run_bounded(&target, &dual, &opp, rounds, seed)?;
                    let shadow = dual.shadow(&t);
                    (t, shadow)
                }
                Player::I => {
                    let base = parse_strategy_i(a.i.as_deref().unwrap(), &dir.source)?;
                    let Dualized::II(dual) = dualize(Base::I(&*base), &dir, mode)? else { unreachable!() };
                    let basis = matches!(target.mover, Mover::F | Mover::Fplus).then(|| target.filter.clone());
                    let t = run_bounded(&target, &RandomI { seed, basis }, &dual, rounds, seed)?;
                    let shadow = dual.shadow(&t);
                    (t, shadow)
                }
            };
            let consistent = shadow.as_ref().is_ok_and(|s| s.consistent);
            out.transcript(&t);
            match shadow {
                Ok(s) => out.line(&json!({ "shadow": s })),
                Err(e) => out.line(&json!({ "shadow": null, "error": e.to_string() })),
            }
            Ok(Status::from_refuted(!t.is_legal() || !consistent))
        }
        TransformKind::ToG1 => {
            let (si, sii) = both()?;
            let c = block(Payoff::F);
            let (i, ii) = (parse_strategy_i(si, &c)?, parse_strategy_ii(sii, &c)?);
            let t = run_g1(&f, &G1FromBlockI { base: &*i }, &G1FromBlockII { base: &*ii }, rounds, seed)?;
            let (summary, status) = g1_verdict(&t);
            out.transcript(&t);
            out.line(&summary);
            Ok(status)
        }
        TransformKind::FromG1 => {
            let (si, sii) = both()?;
            let (i, ii) = (parse_g1_strategy_i(si)?, parse_g1_strategy_ii(sii)?);
            let c = block(Payoff::F);
            let t = run_bounded(
                &c,
                &BlockFromG1I { base: &*i },
                &BlockFromG1II { base: &*ii, bound: CLAIM_BOUND },
                rounds,
                seed,
            )?;
            let forfeit = !t.is_legal();
            out.transcript(&t);
            out.line(&json!({ "outcome": t.outcome(), "forfeit": t.forfeited_by() }));
            Ok(Status::from_refuted(forfeit))
        }
        TransformKind::TwoBoard => {
            let si = a.i.as_deref().ok_or_else(|| usage("two-board needs --I"))?;
            let s = parse_strategy_i(si, &block(Payoff::Fplus))?;
            let r = two_board_pair(&f, &*s, rounds)?;
            out.line(&json!({ "two_board": r, "covered": r.covered() }));
            Ok(Status::from_refuted(!r.covered()))
        }
    }
}

fn ints(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| usage(format!("bad integer `{s}`: {e}"))))
        .collect()
}

pub fn verify_witness(a: WitnessArgs, out: &mut Output) -> Result<Status, CliError> {
    let f = filter(&a.filter)?;
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| usage(format!("{flag} is required")));
    let report = match a.property {
        Property::Selector => {
            let x: Subset = need(&a.set, "--set")?.parse()?;
            let p = Partition::new(need(&a.partition, "--partition")?.parse()?)?;
            check_selector(&x, &p, a.bound)
        }
        Property::Diag => {
            let (mode, family): (DiagMode, DiagFamily) = match a.mode {
                ModeArg::Plain | ModeArg::Plus => {
                    let fam: SetFamily = need(&a.family, "--family")?.parse()?;
                    let mode = if a.mode == ModeArg::Plain { DiagMode::Plain } else { DiagMode::Plus };
                    (mode, fam.into())
                }
                ModeArg::UniversalF | ModeArg::UniversalFplus => {
                    let ladders = need(&a.ladders, "--ladders")?
                        .split('|')
                        .map(|l| Ok(Ladder::new(l.parse()?)?))
                        .collect::<Result<Vec<_>, CliError>>()?;
                    let mode = if a.mode == ModeArg::UniversalF { DiagMode::UniversalF } else { DiagMode::UniversalFplus };
                    (mode, BlockFamily { ladders }.into())
                }
            };
            check_diag(family, &f, mode, a.sample, a.bound)
        }
        Property::Talagrand => {
            let ladder = Ladder::new(need(&a.ladder, "--ladder")?.parse()?)?;
            check_talagrand(&ladder, &f, a.sample, a.bound)?
        }
        Property::Claim => {
            let s = parse_g1_strategy_ii(&need(&a.ii, "--II")?)?;
            check_claim(&*s, &ints(&a.sigma)?, a.bound)
        }
    };
    let refuted = report.verdict.is_refuted();
    out.line(&report);
    Ok(Status::from_refuted(refuted))
}

pub fn tree(a: TreeArgs, out: &mut Output) -> Result<Status, CliError> {
    let config = GameConfig::parse_game(&a.game, filter(&a.filter)?)?;
    let t = build_tree(&a.tree, &config)?;
    let labels = match t.check_labels(a.depth, a.width, config.depth) {
        Ok(n) => json!({ "checked": n, "sound": true }),
        Err(e) => json!({ "sound": false, "error": e.to_string() }),
    };
    let sound = labels["sound"] == Value::Bool(true);
    out.line(&json!({ "tree": a.tree, "labels": labels }));
    let cert = match a.certifier {
        BranchCertifierArg::None => BranchCertifier::None,
        BranchCertifierArg::Union => BranchCertifier::Union,
        BranchCertifierArg::Gaps => match &t.labeler {
            Labeler::Interval(l) => BranchCertifier::IntervalGaps(l.clone()),
            _ => return Err(usage("the gaps certifier needs an interval tree")),
        },
    };
    for r in bounded_branch_search(&t, a.depth, a.width, &cert)? {
        out.line(&json!({
            "path": r.branch.path,
            "union": r.branch.union,
            "union_set": r.branch.union_set.map(|s| s.to_string()),
            "status": r.status,
            "marks": r.marks,
        }));
    }
    Ok(Status::from_refuted(!sound))
}

/// A set given by raw prefix and period bits.
struct Raw {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl Raw {
    fn random(rng: &mut ChaCha8Rng) -> Raw {
        let p = rng.gen_range(0..=16);
        let q = rng.gen_range(1..=12);
        Raw { prefix: (0..p).map(|_| rng.gen()).collect(), period: (0..q).map(|_| rng.gen()).collect() }
    }

    fn eval(&self, n: usize) -> bool {
        match self.prefix.get(n) {
            Some(&b) => b,
            None => self.period[(n - self.prefix.len()) % self.period.len()],
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compares the set algebra against bitwise evaluation on the window
/// `[0, max prefix + 4·lcm(periods))`.
fn oracle_pair(a: &Raw, b: &Raw) -> Result<Vec<&'static str>, CliError> {
    let (x, y) = (UpSet::new(a.prefix.clone(), a.period.clone())?, UpSet::new(b.prefix.clone(), b.period.clone())?);
    let (p, q) = (a.period.len(), b.period.len());
    let h = a.prefix.len().max(b.prefix.len());
    let l = p / gcd(p, q) * q;
    let mut bad = BTreeSet::new();
    let (and, or, diff, comp) = (x.and(&y), x.or(&y), x.diff(&y), x.complement());
    for n in 0..h + 4 * l {
        let (s, t) = (a.eval(n), b.eval(n));
        let m = n as u64;
        for (name, got, want) in [
            ("and", and.contains(m), s && t),
            ("or", or.contains(m), s || t),
            ("diff", diff.contains(m), s && !t),
            ("complement", comp.contains(m), !s),
        ] {
            if got != want {
                bad.insert(name);
            }
        }
    }
    if x.almost_subset(&y) != (h..h + l).all(|n| !a.eval(n) || b.eval(n)) {
        bad.insert("almost_subset");
    }
    let ones = (a.prefix.len()..a.prefix.len() + p).filter(|&n| a.eval(n)).count();
    let card = match ones {
        0 => CardClass::Finite,
        o if o == p => CardClass::Cofinite,
        _ => CardClass::InfiniteCoinfinite,
    };
    if x.card_class() != card {
        bad.insert("card_class");
    }
    Ok(bad.into_iter().collect())
}

pub fn oracle_check(a: OracleArgs, out: &mut Output) -> Result<Status, CliError> {
    let f = filter(&a.filter)?;
    let depth = match a.depth {
        Some(d) => Depth::new(d)?,
        None => Depth::default(),
    };
    if let Some(text) = &a.set {
        let x: Subset = text.parse()?;
        let region = f.classify(&x, depth)?;
        out.line(&json!({ "set": x.to_string(), "filter": f.to_string(), "depth": depth.get(), "region": region }));
        return Ok(Status::Ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut mismatches = 0;
    for i in 0..a.samples {
        let (x, y) = (Raw::random(&mut rng), Raw::random(&mut rng));
        let bad = oracle_pair(&x, &y)?;
        if !bad.is_empty() {
            mismatches += 1;
            out.line(&json!({ "sample": i, "mismatch": bad }));
        }
    }
    out.line(&json!({ "samples": a.samples, "seed": a.seed, "mismatches": mismatches }));
    Ok(Status::from_refuted(mismatches > 0))
}

/// Splits a saved file into its transcript and the summary line written
/// after it.
fn split_saved(text: &str) -> Result<(Transcript, Option<Value>), CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| usage("empty transcript file"))?;
    let mut body = vec![header.to_string()];
    let mut summary = None;
    for l in lines {
        if serde_json::from_str::<MoveRecord>(l).is_ok() {
            body.push(l.to_string());
        } else {
            summary = Some(serde_json::from_str(l).map_err(|e| usage(format!("unreadable line `{l}`: {e}")))?);
        }
    }
    Ok((Transcript::from_jsonl(&body.join("\n"))?, summary))
}

fn rerun(t: &Transcript) -> Option<Transcript> {
    let h = &t.header;
    match h.config.variant {
        Variant::G1 => {
            let (i, ii) = (parse_g1_strategy_i(&h.strategy_i).ok()?, parse_g1_strategy_ii(&h.strategy_ii).ok()?);
            run_g1(&h.config.filter, &*i, &*ii, h.rounds, h.seed).ok()
        }
        Variant::Standard => {
            let i: Box<dyn StrategyI> = parse_strategy_i(&h.strategy_i, &h.config).ok()?;
            let ii: Box<dyn StrategyII> = parse_strategy_ii(&h.strategy_ii, &h.config).ok()?;
            run_bounded(&h.config, &*i, &*ii, h.rounds, h.seed).ok()
        }
    }
}

pub fn replay(a: ReplayArgs, out: &mut Output) -> Result<Status, CliError> {
    let text = fs::read_to_string(&a.input).map_err(|source| CliError::Io { path: a.input.clone(), source })?;
    let (t, recorded) = split_saved(&text)?;
    let reproduced = rerun(&t).map(|r| r == t);
    let recorded_verdict = recorded.as_ref().and_then(|s| s.get("verdict")).cloned();
    let (verdict, status) = match t.header.config.variant {
        Variant::G1 => {
            let (summary, status) = g1_verdict(&t);
            (summary["verdict"].clone(), status)
        }
        Variant::Standard => {
            let from_file = recorded.as_ref().and_then(|s| s.get("certifier")).and_then(Value::as_str);
            let name = a.certifier.as_deref().or(from_file).unwrap_or("auto");
            let (summary, status) = certify(&t, name)?;
            (summary["verdict"].clone(), status)
        }
    };
    let matches = recorded_verdict.map(|r| r == verdict);
    out.line(&json!({ "replay": { "reproduced": reproduced, "verdict": verdict, "matches_recorded": matches } }));
    let diverged = reproduced == Some(false) || matches == Some(false);
    Ok(if diverged { Status::Refuted } else { status })
}
