mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::duality::{replay, DIRECTIONS};
use common::{joint_cycle, random_grid, random_raw, window};
use filter_games::games::{
    run_bounded, run_g1, G1History, G1StrategyI, G1StrategyII, G1Threshold, GameConfig, IIMove, MoveKind, Mover,
    NextAbove, Payoff, Player, StrategyError,
};
use filter_games::strategies::{
    ChainIntersect, FixedSet, ImageMode, IntervalStrategy, PartitionBlock, RandomI, RandomII, SigmaDiag, ThresholdI,
    ThresholdRule,
};
use filter_games::transforms::{two_board_pair, BlockFromG1I, BlockFromG1II, G1FromBlockI, G1FromBlockII, CLAIM_BOUND};
use filter_games::trees::{bounded_branch_search, nmp_branch, BranchCertifier, FTree, FixedIntervalMiss, FixedPseudo};
use filter_games::witnesses::{
    check_claim, check_diag, check_talagrand, extract_generators, extract_pi_ladder, DiagMode, Ladder, LadderSource,
    Partition, SeqRule, SetFamily, WitnessVerdict,
};
use filter_games::{CardClass, Depth, FilterSpec, Region, Subset, UpSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Column index of a grid point: the number of trailing zeros of `x + 1`.
fn column_of(x: u64) -> u64 {
    let mut y = x + 1;
    let mut c = 0;
    while y % 2 == 0 {
        y /= 2;
        c += 1;
    }
    c
}

/// Number of trailing one bits of `k + 1`.
fn sigma_oracle(k: u64) -> u64 {
    let mut y = k + 1;
    let mut c = 0;
    while y % 2 == 1 {
        y /= 2;
        c += 1;
    }
    c
}

fn descriptor_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let (a, b) = (random_raw(&mut rng, 16, 12), random_raw(&mut rng, 16, 12));
        let (x, y) = (a.up(), b.up());
        let (and, or, diff, comp) = (x.and(&y), x.or(&y), x.diff(&y), x.complement());
        for n in 0..window(&a, &b) {
            let (p, q) = (a.eval(n), b.eval(n));
            if and.contains(n) != (p && q) || or.contains(n) != (p || q) || diff.contains(n) != (p && !q) {
                mismatches += 1;
            }
            if comp.contains(n) == p {
                mismatches += 1;
            }
        }
        let almost = joint_cycle(&a, &b).all(|n| !a.eval(n) || b.eval(n));
        mismatches += usize::from(x.almost_subset(&y) != almost);
        let ones = a.cycle().filter(|&n| a.eval(n)).count();
        let card = match ones {
            0 => CardClass::Finite,
            o if o == a.period.len() => CardClass::Cofinite,
            _ => CardClass::InfiniteCoinfinite,
        };
        mismatches += usize::from(x.card_class() != card);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!("1000 pairs, 0 mismatches, {secs:.2}s"))
}

fn filter_laws() -> Outcome {
    let filters = [
        FilterSpec::Frechet,
        FilterSpec::DyadicChain,
        FilterSpec::finite_gen(vec![UpSet::evens(), UpSet::residue(3, 0).or(&UpSet::residue(3, 1))]).unwrap(),
        FilterSpec::FrTensorFr,
        FilterSpec::ProductInner(Box::new(FilterSpec::DyadicChain)),
    ];
    let d = Depth::default();
    let mut report = Vec::new();
    for (fi, f) in filters.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + fi as u64);
        let draw = |rng: &mut ChaCha8Rng| -> Subset {
            if f.is_grid() {
                random_grid(rng).into()
            } else {
                random_raw(rng, 16, 12).up().into()
            }
        };
        let (mut violations, mut unknown) = (0, 0);
        for i in 0..500 {
            let s = draw(&mut rng);
            let r = f.classify(&s, d).unwrap();
            if r.is_unknown() {
                unknown += 1;
                continue;
            }
            let regions = [Region::InF, Region::InFplusOnly, Region::InFstar];
            violations += usize::from(regions.iter().filter(|&&g| g == r).count() != 1);
            violations += usize::from(r.in_f() == Some(true) && r.in_fplus() != Some(true));
            let c = f.classify(&s.complement(), d).unwrap();
            if !c.is_unknown() {
                violations += usize::from((r.in_fplus() == Some(true)) != (c != Region::InF));
            }
            if i < 200 {
                let t = s.or(&draw(&mut rng));
                let u = f.classify(&t, d).unwrap();
                violations += usize::from(r == Region::InF && u != Region::InF && !u.is_unknown());
                violations += usize::from(r.in_fplus() == Some(true) && u == Region::InFstar);
            }
        }
        let must_decide = !f.is_grid();
        ensure(violations == 0, || format!("{}: {violations} violations", f.kind_name()))?;
        ensure(!must_decide || unknown == 0, || format!("{}: {unknown} unknown", f.kind_name()))?;
        report.push(format!("{} unknown={unknown}", f.kind_name()));
    }
    Ok(format!("500 descriptors per filter, 0 violations; {}", report.join(", ")))
}

fn partition_invariant() -> Outcome {
    let p = Partition::new(SeqRule::Squares { a: 0 }).unwrap();
    let c = GameConfig::new(Mover::Fr, MoveKind::Element, Payoff::Fplus, FilterSpec::Frechet);
    let s = PartitionBlock { partition: p };
    for seed in 0..200 {
        let t = run_bounded(&c, &s, &RandomII { seed, mode: MoveKind::Element }, 100, seed).unwrap();
        ensure(t.is_legal(), || format!("seed {seed}: illegal play"))?;
        let mut seen = BTreeSet::new();
        for n in t.ints(Player::II) {
            let block = (0u64..).find(|k| (k + 1) * (k + 1) > n).unwrap();
            ensure(seen.insert(block), || format!("seed {seed}: block {block} met twice"))?;
        }
    }
    Ok("200 adversaries x 100 rounds, 0 violations".into())
}

fn sigma_invariant() -> Outcome {
    let c = GameConfig::new(Mover::Fr, MoveKind::Element, Payoff::Fplus, FilterSpec::FrTensorFr);
    let ii = SigmaDiag::elements(SetFamily::Columns, MoveKind::Element);
    let mut need: BTreeMap<u64, usize> = BTreeMap::new();
    for k in 0..200 {
        *need.entry(sigma_oracle(k)).or_default() += 1;
    }
    for seed in 0..100 {
        let t = run_bounded(&c, &RandomI { seed, basis: None }, &ii, 200, seed).unwrap();
        ensure(t.is_legal(), || format!("seed {seed}: illegal play"))?;
        let mut got: BTreeMap<u64, usize> = BTreeMap::new();
        for n in t.outcome() {
            *got.entry(column_of(n)).or_default() += 1;
        }
        for (&col, &want) in &need {
            let have = got.get(&col).copied().unwrap_or(0);
            ensure(have >= want, || format!("seed {seed}: column {col} has {have} < {want}"))?;
        }
    }
    Ok("100 adversaries x 200 rounds, 0 violations".into())
}

fn duality_replay() -> Outcome {
    let mut plays = 0;
    for d in 0..4 {
        for b in 0..3 {
            for seed in 0..100 {
                let r = replay(d, b, seed, 50, ImageMode::Exact);
                ensure(r.legal && r.identical && r.shadow_legal && !r.flagged, || {
                    format!("{:?} base {b} seed {seed}: {r:?}", DIRECTIONS[d])
                })?;
                plays += 1;
            }
        }
    }
    let bounds = [4u64, 8, 16, 32, 64];
    let mut approx = 0;
    for (d, (side, _)) in DIRECTIONS.iter().enumerate() {
        if *side != Player::II {
            continue;
        }
        for b in 0..3 {
            for seed in 0..100 {
                let failed: Vec<bool> =
                    bounds.iter().map(|&m| !replay(d, b, seed, 50, ImageMode::Approx(m)).identical).collect();
                ensure(failed.windows(2).all(|w| w[0] || !w[1]), || {
                    format!("{:?} base {b} seed {seed}: flags {failed:?}", DIRECTIONS[d])
                })?;
                approx += 1;
            }
        }
    }
    Ok(format!("{plays} exact replays unflagged, {approx} approximate ladders monotone"))
}

fn chain_generated() -> Outcome {
    let f = FilterSpec::DyadicChain;
    let c = GameConfig::new(Mover::F, MoveKind::Element, Payoff::F, f.clone());
    let s = ChainIntersect { filter: f.clone(), subtract: true };
    for seed in 0..100 {
        let t = run_bounded(&c, &s, &RandomII { seed, mode: MoveKind::Element }, 12, seed).unwrap();
        ensure(t.is_legal(), || format!("seed {seed}: illegal play"))?;
        for (k, n) in t.ints(Player::II).into_iter().enumerate() {
            let k = k as u64;
            let in_prev = k == 0 || (n % (1 << (k - 1)) == 0 && n >= k - 1);
            ensure(in_prev && n >= k, || format!("seed {seed}: n_{k} = {n}"))?;
        }
    }
    let g = extract_generators(&s, 12, 1).map_err(|e| e.to_string())?;
    let samples: Vec<Subset> = (0..5u64)
        .flat_map(|j| {
            let m = UpSet::multiples(1 << j);
            [m.clone(), m.complement(), m.or(&UpSet::residue(4, 1)), m.and(&UpSet::tail(9))]
        })
        .map(Subset::from)
        .collect();
    let depth = Depth::new(8).unwrap();
    for x in &samples {
        let (a, b) = (g.classify(x, depth).unwrap(), f.classify(x, depth).unwrap());
        ensure(a == b, || format!("{x}: extracted {a:?} vs dyadic {b:?}"))?;
    }
    Ok(format!("100 plays, 0 violations; {} samples agree", samples.len()))
}

/// I replays a fixed list of integers.
struct ScriptM(Vec<u64>);

impl G1StrategyI for ScriptM {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError> {
        self.0.get(h.round()).copied().ok_or(StrategyError::Exhausted)
    }

    fn describe(&self) -> String {
        "script".into()
    }
}

/// II replays a fixed list of integers.
struct ScriptN(Vec<u64>);

impl G1StrategyII for ScriptN {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        self.0.get(h.ns.len()).copied().ok_or(StrategyError::Exhausted)
    }

    fn describe(&self) -> String {
        "script".into()
    }
}

fn union(moves: &[IIMove]) -> BTreeSet<u64> {
    moves.iter().flat_map(IIMove::elements).collect()
}

fn g1_translators() -> Outcome {
    let block = GameConfig::new(Mover::Fr, MoveKind::FiniteBlock, Payoff::F, FilterSpec::Frechet);
    let fr = FilterSpec::Frechet;
    for seed in 0..100u64 {
        let d = 1 + seed % 3;
        let err = |dir: &str| format!("{dir}, seed {seed}: outcomes differ");

        let s = G1Threshold { a: None, d };
        let t = run_bounded(&block, &BlockFromG1I { base: s }, &RandomII { seed, mode: MoveKind::FiniteBlock }, 50, seed)
            .unwrap();
        let u = union(&t.ii_moves());
        let ns: Vec<u64> = u.iter().copied().collect();
        let g = run_g1(&fr, &s, &ScriptN(ns.clone()), ns.len(), 0).unwrap();
        ensure(t.is_legal() && g.ints(Player::II).into_iter().collect::<BTreeSet<_>>() == u, || err("I g1->block"))?;

        let b = ThresholdI { rule: ThresholdRule::Seq(SeqRule::Linear { a: seed % 7, d }) };
        let g = run_g1(&fr, &G1FromBlockI { base: &b }, &NextAbove, 50, 0).unwrap();
        let (ms, ns) = (g.ints(Player::I), g.ints(Player::II));
        let blocks = G1FromBlockI::<&ThresholdI>::blocks(&ms[..ns.len()], &ns);
        let regrouped: BTreeSet<u64> = blocks.iter().flatten().copied().collect();
        ensure(regrouped == ns.iter().copied().collect(), || err("I block->g1"))?;

        let ii = G1FromBlockII { base: RandomII { seed, mode: MoveKind::FiniteBlock } };
        let g = run_g1(&fr, &G1Threshold { a: Some(seed % 5), d }, &ii, 50, 0).unwrap();
        let (bh, out) = ii.simulate(&g.ints(Player::I), 0).map_err(|e| e.to_string())?;
        let emitted: BTreeSet<u64> = out.iter().copied().collect();
        let done = union(&bh.ii_moves[..bh.ii_moves.len() - 1]);
        ensure(out == g.ints(Player::II) && done.is_subset(&emitted), || err("II block->g1"))?;

        let ii = BlockFromG1II { base: NextAbove, bound: CLAIM_BOUND };
        let t = run_bounded(&block, &RandomI { seed, basis: None }, &ii, 50, seed).unwrap();
        let ts: Vec<u64> =
            t.i_sets().iter().map(|x| x.as_up().unwrap().tail_start().unwrap().saturating_sub(1)).collect();
        let (gseq, _) = ii.simulate(&ts).map_err(|e| e.to_string())?;
        let g = run_g1(&fr, &ScriptM(gseq.clone()), &NextAbove, gseq.len(), 0).unwrap();
        let same = g.ints(Player::II).into_iter().collect::<BTreeSet<_>>() == union(&t.ii_moves());
        ensure(t.is_legal() && same, || err("II g1->block"))?;
    }
    let least = G1FromBlockII { base: FixedSet::least(MoveKind::FiniteBlock) };
    let shipped: [(&str, &dyn G1StrategyII); 2] = [("next-above", &NextAbove), ("toblock(least)", &least)];
    for (name, s) in shipped {
        for sigma in [vec![], vec![0], vec![2, 5], vec![1, 3, 7]] {
            let r = check_claim(s, &sigma, CLAIM_BOUND);
            ensure(r.verdict.is_verified(), || format!("claim for {name} at {sigma:?}: {:?}", r.verdict))?;
        }
    }
    Ok("4 directions x 100 plays x 50 rounds equal; claim verified at bound 8".into())
}

fn two_board() -> Outcome {
    let rules = [
        ThresholdRule::Fixed(0),
        ThresholdRule::Seq(SeqRule::Linear { a: 5, d: 3 }),
        ThresholdRule::AboveLast { gap: 2 },
    ];
    for rule in rules {
        let s = ThresholdI { rule };
        let r = two_board_pair(&FilterSpec::Frechet, &s, 100).map_err(|e| e.to_string())?;
        let both: BTreeSet<u64> = r.a_set.union(&r.b_set).copied().collect();
        let gaps: Vec<u64> = (r.start..=r.top).filter(|n| !both.contains(n)).collect();
        ensure(gaps.is_empty(), || format!("{:?}: gaps {gaps:?}", s.rule))?;
        ensure(r.a.is_legal() && r.b.is_legal(), || format!("{:?}: illegal board", s.rule))?;
        ensure(r.fresh.contains(&100), || format!("{:?}: neither board grows every round {:?}", s.rule, r.fresh))?;
    }
    Ok("3 threshold strategies x 100 rounds, 0 gaps".into())
}

fn interval_talagrand() -> Outcome {
    let pow2 = Ladder::new(SeqRule::Pow2).unwrap();
    let r = check_talagrand(&pow2, &FilterSpec::DyadicChain, 10, 12).map_err(|e| e.to_string())?;
    ensure(r.verdict.is_verified(), || format!("talagrand: {:?}", r.verdict))?;

    let ladder = Ladder::new(SeqRule::Squares { a: 1 }).unwrap();
    let c = GameConfig::new(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, FilterSpec::DyadicChain);
    let s = IntervalStrategy { ladder: ladder.clone() };
    let mut fewest = usize::MAX;
    for seed in 0..10 {
        let t = run_bounded(&c, &RandomI { seed, basis: None }, &s, 100, seed).unwrap();
        ensure(t.is_legal(), || format!("seed {seed}: illegal play"))?;
        let complete = t
            .ii_moves()
            .iter()
            .filter(|mv| {
                let b = mv.elements();
                (0..256).filter_map(|k| ladder.interval(k)).any(|(lo, hi)| b.iter().copied().eq(lo..hi))
            })
            .count();
        fewest = fewest.min(complete);
    }
    ensure(fewest >= 25, || format!("only {fewest} complete intervals"))?;

    let src = IntervalStrategy { ladder: pow2 };
    let extracted = extract_pi_ladder(LadderSource::II(&src), 13, 1 << 14).map_err(|e| e.to_string())?;
    let r = check_talagrand(&extracted, &FilterSpec::DyadicChain, 10, 12).map_err(|e| e.to_string())?;
    ensure(r.verdict.is_verified(), || format!("extracted ladder: {:?}", r.verdict))?;
    Ok(format!("talagrand verified; >= {fewest} complete intervals per 100 rounds; extraction re-verifies"))
}

fn tree_constructions() -> Outcome {
    let d = Depth::default();
    let chain = FTree::chain(FilterSpec::DyadicChain).check_labels(10, 1, d).map_err(|e| e.to_string())?;
    let squares = Ladder::new(SeqRule::Squares { a: 1 }).unwrap();
    let interval = FTree::interval(squares).check_labels(10, 1, d).map_err(|e| e.to_string())?;

    let mock = FTree::chain(FilterSpec::finite_gen(vec![UpSet::omega(), UpSet::evens(), UpSet::multiples(4)]).unwrap());
    let pseudo = FixedPseudo(UpSet::multiples(4).into());
    for parity in 0..2 {
        let (_, steps) = nmp_branch(&mock, &pseudo, &FixedIntervalMiss { parity }, 6).map_err(|e| e.to_string())?;
        for s in &steps {
            let label: Subset = s.label.parse().map_err(|e: filter_games::SetError| e.to_string())?;
            let inside = s.block.iter().all(|&n| label.contains(n) && n % 4 == 0);
            ensure(inside && s.inside_chain && s.inside_label, || format!("parity {parity}: step {s:?}"))?;
        }
    }

    let ladder = Ladder::new(SeqRule::Pow2).unwrap();
    let t = FTree::interval(ladder.clone());
    let reports = bounded_branch_search(&t, 4, 2, &BranchCertifier::IntervalGaps(ladder.clone())).map_err(|e| e.to_string())?;
    for r in &reports {
        let entries: Vec<u64> = r.branch.path.iter().map(|e| *e.iter().next().unwrap()).collect();
        for w in entries.windows(2) {
            let skipped = (0..64).filter_map(|k| ladder.interval(k)).any(|(lo, hi)| {
                w[0] < lo && hi <= w[1] && !r.branch.union.iter().any(|n| (lo..hi).contains(n))
            });
            ensure(skipped, || format!("branch {entries:?} skips no interval"))?;
        }
    }
    Ok(format!("{chain}+{interval} labels sound; nmp contained; {} branches skip per step", reports.len()))
}

fn example_pair() -> Outcome {
    let f = FilterSpec::FrTensorFr;
    for bound in 10..=50 {
        let plain = check_diag(SetFamily::Columns, &f, DiagMode::Plain, 10, bound);
        ensure(plain.verdict.is_verified(), || format!("plain at {bound}: {:?}", plain.verdict))?;
        let plus = check_diag(SetFamily::Columns, &f, DiagMode::Plus, 10, bound);
        let WitnessVerdict::Refuted { counterexample } = &plus.verdict else {
            return Err(format!("plus at {bound}: {:?}", plus.verdict));
        };
        let member = counterexample["member"].as_u64().unwrap();
        let set: Subset = counterexample["set"].as_str().unwrap().parse().map_err(|e: filter_games::SetError| e.to_string())?;
        let single = (0..64).all(|n| {
            let col = set.and(&filter_games::witnesses::column(n));
            if n == member {
                col == filter_games::witnesses::column(n)
            } else {
                col.is_empty()
            }
        });
        ensure(single, || format!("plus at {bound}: counterexample {set} is not column {member}"))?;
        let r = f.classify(&set, Depth::default()).unwrap();
        ensure(r == Region::InFstar, || format!("plus at {bound}: counterexample classifies {r:?}"))?;
    }
    Ok("plain verified and plus refuted by a single column for bounds 10..=50".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("descriptor oracle", descriptor_oracle),
        ("filter laws", filter_laws),
        ("partition selector", partition_invariant),
        ("sigma diagonalization", sigma_invariant),
        ("duality replay", duality_replay),
        ("countably generated", chain_generated),
        ("g1 translators", g1_translators),
        ("two-board pairing", two_board),
        ("interval strategy and talagrand", interval_talagrand),
        ("tree constructions", tree_constructions),
        ("diag example pair", example_pair),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
