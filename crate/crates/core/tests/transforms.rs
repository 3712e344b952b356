mod common;

use std::collections::BTreeSet;

use common::duality::{replay, DIRECTIONS};
use filter_games::games::{
    run_bounded, run_g1, G1History, G1StrategyI, GameConfig, IIMove, MoveKind, Mover, NextAbove, Payoff, Player,
    StrategyError, StrategyI,
};
use filter_games::strategies::{FixedSet, ImageMode, RandomI, RandomII, ScriptedII, ThresholdI, ThresholdRule};
use filter_games::transforms::{
    two_board_pair, BlockFromG1I, BlockFromG1II, G1FromBlockI, G1FromBlockII, SingletonEmbed, SingletonReduce,
    CLAIM_BOUND,
};
use filter_games::games::G1Threshold;
use filter_games::witnesses::SeqRule;
use filter_games::FilterSpec;
use proptest::prelude::*;

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

fn block_game() -> GameConfig {
    GameConfig::new(Mover::Fr, MoveKind::FiniteBlock, Payoff::F, FilterSpec::Frechet)
}

fn union(moves: &[IIMove]) -> BTreeSet<u64> {
    moves.iter().flat_map(IIMove::elements).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dual_replay_is_legal_and_move_identical(d in 0usize..4, b in 0usize..3, seed in any::<u64>()) {
        let r = replay(d, b, seed, 20, ImageMode::Exact);
        prop_assert!(r.legal && r.identical && r.shadow_legal, "{:?} {:?}", DIRECTIONS[d], r);
        prop_assert!(!r.flagged);
    }

    #[test]
    fn approx_flags_are_monotone(b in 0usize..3, seed in any::<u64>()) {
        // one reply sequence, replayed with growing enumeration bounds
        let exact = replay(0, b, seed, 12, ImageMode::Exact);
        prop_assert!(exact.identical);
        let failed: Vec<bool> = [4u64, 8, 16, 32, 64]
            .iter()
            .map(|&m| !replay(0, b, seed, 12, ImageMode::Approx(m)).identical)
            .collect();
        for w in failed.windows(2) {
            prop_assert!(w[0] || !w[1], "{:?}", failed);
        }
    }

    #[test]
    fn singleton_reduce_keeps_outcomes(seed in any::<u64>()) {
        let c = block_game();
        let e = GameConfig { move_kind: MoveKind::Element, ..c.clone() };
        let i = RandomI { seed, basis: None };
        let base = RandomII { seed, mode: MoveKind::Element };
        let direct = run_bounded(&e, &i, &base, 20, seed).unwrap();
        let embedded = run_bounded(&c, &filter_games::transforms::ElementViewI { base: RandomI { seed, basis: None } }, &SingletonEmbed { base: &base }, 20, seed).unwrap();
        prop_assert_eq!(direct.outcome(), embedded.outcome());
        let back = run_bounded(&e, &i, &SingletonReduce { base: SingletonEmbed { base: &base } }, 20, seed).unwrap();
        prop_assert_eq!(back.outcome(), direct.outcome());
    }

    #[test]
    fn g1_translators_keep_outcomes(seed in any::<u64>(), d in 1u64..4) {
        // I: 𝔊₁ → block. The 𝔊₁ play fed by the sorted union has that union as outcome.
        let s = G1Threshold { a: None, d };
        let t = run_bounded(&block_game(), &BlockFromG1I { base: s }, &RandomII { seed, mode: MoveKind::FiniteBlock }, 20, seed).unwrap();
        prop_assert!(t.is_legal());
        let u = union(&t.ii_moves());
        let ns: Vec<u64> = u.iter().copied().collect();
        let g = run_g1(&FilterSpec::Frechet, &s, &ScriptedNs(ns.clone()), ns.len(), 0).unwrap();
        prop_assert_eq!(g.ints(Player::II).into_iter().collect::<BTreeSet<_>>(), u);

        // I: block → 𝔊₁. Regrouped blocks have the 𝔊₁ outcome as union.
        let b = ThresholdI { rule: ThresholdRule::Seq(SeqRule::Linear { a: seed % 7, d }) };
        let g = run_g1(&FilterSpec::Frechet, &G1FromBlockI { base: &b }, &NextAbove, 20, 0).unwrap();
        let (ms, ns) = (g.ints(Player::I), g.ints(Player::II));
        let blocks = G1FromBlockI::<&ThresholdI>::blocks(&ms[..ns.len()], &ns);
        prop_assert_eq!(blocks.iter().flatten().copied().collect::<BTreeSet<_>>(), ns.iter().copied().collect());

        // II: block → 𝔊₁. Emitted integers are the blocks read in order.
        let ii = G1FromBlockII { base: RandomII { seed, mode: MoveKind::FiniteBlock } };
        let g = run_g1(&FilterSpec::Frechet, &G1Threshold { a: Some(seed % 5), d }, &ii, 20, 0).unwrap();
        let (bh, out) = ii.simulate(&g.ints(Player::I), 0).unwrap();
        prop_assert_eq!(&out, &g.ints(Player::II));
        let all: Vec<u64> = bh.ii_moves.iter().flat_map(IIMove::elements).collect();
        prop_assert_eq!(&all[..out.len()], &out[..]);
        let done = union(&bh.ii_moves[..bh.ii_moves.len() - 1]);
        prop_assert!(done.is_subset(&out.iter().copied().collect()));

        // II: 𝔊₁ → block. Blocks are exactly II's 𝔊₁ replies on the simulated play.
        let ii = BlockFromG1II { base: NextAbove, bound: CLAIM_BOUND };
        let t = run_bounded(&block_game(), &RandomI { seed, basis: None }, &ii, 20, seed).unwrap();
        prop_assert!(t.is_legal());
        let ts: Vec<u64> = t.i_sets().iter().map(|x| x.as_up().unwrap().tail_start().unwrap().saturating_sub(1)).collect();
        let (gseq, _) = ii.simulate(&ts).unwrap();
        let g = run_g1(&FilterSpec::Frechet, &ScriptM(gseq.clone()), &NextAbove, gseq.len(), 0).unwrap();
        prop_assert_eq!(g.ints(Player::II).into_iter().collect::<BTreeSet<_>>(), union(&t.ii_moves()));
    }
}

/// II replays a fixed list of integers.
struct ScriptedNs(Vec<u64>);

impl filter_games::games::G1StrategyII for ScriptedNs {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        self.0.get(h.ns.len()).copied().ok_or(StrategyError::Exhausted)
    }

    fn describe(&self) -> String {
        "script".into()
    }
}

#[test]
fn two_board_covers_against_threshold_strategies() {
    let rules = [
        ThresholdRule::Fixed(0),
        ThresholdRule::Seq(SeqRule::Linear { a: 5, d: 3 }),
        ThresholdRule::AboveLast { gap: 2 },
    ];
    for rule in rules {
        let s = ThresholdI { rule };
        let r = two_board_pair(&FilterSpec::Frechet, &s, 100).unwrap();
        assert!(r.covered(), "{:?}", r.gaps);
        assert!(r.a.is_legal() && r.b.is_legal());
        assert_eq!(r.fresh, [100, 100]);
    }
}

#[test]
fn scripted_block_reply_reduces_to_least_elements() {
    let base = ScriptedII(vec![IIMove::block([2, 5]), IIMove::block([7])]);
    let c = GameConfig { move_kind: MoveKind::Element, ..block_game() };
    let t = run_bounded(&c, &RandomI { seed: 0, basis: Some(FilterSpec::Frechet) }, &SingletonReduce { base }, 2, 0);
    let t = t.unwrap();
    if t.is_legal() {
        assert_eq!(t.ints(Player::II), vec![2, 7]);
    }
    let least = FixedSet::least(MoveKind::FiniteBlock);
    let x: Box<dyn StrategyI> = Box::new(RandomI { seed: 1, basis: None });
    let a = run_bounded(&block_game(), &*x, &least, 10, 0).unwrap();
    let b = run_bounded(&c, &*x, &SingletonReduce { base: &least }, 10, 0).unwrap();
    assert_eq!(a.outcome(), b.outcome());
}
