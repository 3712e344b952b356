use filter_games::strategies::{FixedSet, ImageMode, SigmaDiag};
use filter_games::trees::{
    bounded_branch_search, nmp_branch, tree_from_strategy_ii, BranchCertifier, FTree, FixedIntervalMiss, FixedPseudo,
};
use filter_games::games::MoveKind;
use filter_games::witnesses::{Ladder, SeqRule, SetFamily};
use filter_games::{Depth, FilterSpec, UpSet};
use proptest::prelude::*;

fn mock_tree() -> FTree {
    FTree::chain(FilterSpec::finite_gen(vec![UpSet::omega(), UpSet::evens(), UpSet::multiples(4)]).unwrap())
}

#[test]
fn chain_and_interval_labels_are_sound_at_depth_ten() {
    assert_eq!(FTree::chain(FilterSpec::DyadicChain).check_labels(10, 1, Depth::default()).unwrap(), 11);
    let t = FTree::interval(Ladder::new(SeqRule::Squares { a: 1 }).unwrap());
    assert!(t.check_labels(10, 1, Depth::default()).unwrap() >= 11);
    assert!(FTree::chain(FilterSpec::FrTensorFr).check_labels(4, 2, Depth::default()).is_ok());
}

#[test]
fn branch_entries_lie_in_their_prefix_labels() {
    for t in [FTree::chain(FilterSpec::DyadicChain), FTree::interval(Ladder::new(SeqRule::Pow2).unwrap())] {
        let reports = bounded_branch_search(&t, 4, 2, &BranchCertifier::None).unwrap();
        assert!(!reports.is_empty());
        for r in reports {
            let path = &r.branch.path;
            for l in 0..path.len() {
                let label = t.label(&path[..l]).unwrap();
                assert!(path[l].iter().all(|&n| label.contains(n)), "{:?} at {}", path, l);
            }
        }
    }
}

#[test]
fn interval_branches_skip_an_interval_per_step() {
    let ladder = Ladder::new(SeqRule::Pow2).unwrap();
    let t = FTree::interval(ladder.clone());
    for r in bounded_branch_search(&t, 4, 2, &BranchCertifier::IntervalGaps(ladder.clone())).unwrap() {
        let entries: Vec<u64> = r.branch.path.iter().map(|e| *e.iter().next().unwrap()).collect();
        for w in entries.windows(2) {
            let skipped = (0..64).filter_map(|k| ladder.interval(k)).any(|(lo, hi)| {
                w[0] < lo && hi <= w[1] && !r.branch.union.iter().any(|&n| (lo..hi).contains(&n))
            });
            assert!(skipped, "{:?}", entries);
        }
    }
}

#[test]
fn nmp_branch_steps_are_locally_contained() {
    for parity in 0..2 {
        let (b, steps) = nmp_branch(&mock_tree(), &FixedPseudo(UpSet::multiples(4).into()), &FixedIntervalMiss { parity }, 6).unwrap();
        assert_eq!(steps.len(), 6);
        for s in &steps {
            assert!(s.inside_chain && s.inside_label, "{s:?}");
            let label: filter_games::Subset = s.label.parse().unwrap();
            assert!(s.block.iter().all(|&n| label.contains(n)));
        }
        assert!(b.union.iter().all(|n| n % 4 == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn strategy_trees_replay_to_themselves(r in 0u64..3, m in 1u64..4, width in 1usize..4) {
        let x = UpSet::residue(m, r % m).into();
        let s = FixedSet { x, mode: MoveKind::Element };
        let t = tree_from_strategy_ii(&s, &FilterSpec::Frechet, 4, width, ImageMode::Exact).unwrap();
        prop_assert_eq!(t.replay_audit(&s).unwrap(), t.remembered.len());
        let sd = SigmaDiag::elements(SetFamily::Columns, MoveKind::Element);
        let t = tree_from_strategy_ii(&sd, &FilterSpec::Frechet, 3, width, ImageMode::Exact).unwrap();
        prop_assert_eq!(t.replay_audit(&sd).unwrap(), t.remembered.len());
    }
}
