mod common;

use common::{arb_raw, arb_subset, arb_up, Raw};
use filter_games::{Depth, FilterSpec, Region, Subset, UpSet};
use num_integer::Integer;
use proptest::prelude::*;

fn filters() -> Vec<FilterSpec> {
    vec![
        FilterSpec::Frechet,
        FilterSpec::DyadicChain,
        FilterSpec::finite_gen(vec![UpSet::evens(), UpSet::residue(3, 0).or(&UpSet::residue(3, 1))]).unwrap(),
        FilterSpec::FrTensorFr,
        FilterSpec::ProductInner(Box::new(FilterSpec::DyadicChain)),
    ]
}

fn classify(f: &FilterSpec, s: &Subset) -> Region {
    f.classify(s, Depth::default()).unwrap()
}

/// `S` contains almost all multiples of `2ⁿ` for some `n`, scanning one
/// joint cycle past the prefix.
fn dyadic_oracle(s: &Raw) -> bool {
    (0..16u32).any(|n| {
        let step = 1u64 << n;
        let p = s.prefix.len() as u64;
        let l = step.lcm(&(s.period.len() as u64));
        (p..p + l).all(|k| k % step != 0 || s.eval(k))
    })
}

/// `S` almost contains the intersection of the generators.
fn finite_gen_oracle(gens: &[Raw], s: &Raw) -> bool {
    let all = gens.iter().chain([s]);
    let h = all.clone().map(|r| r.prefix.len() as u64).max().unwrap();
    let l = all.fold(1u64, |acc, r| acc.lcm(&(r.period.len() as u64)));
    (h..h + l).all(|k| !gens.iter().all(|g| g.eval(k)) || s.eval(k))
}

proptest! {
    #[test]
    fn laws_hold_for_every_filter(s in arb_subset(), extra in arb_subset()) {
        let t = s.or(&extra);
        prop_assume!(matches!(s, Subset::Grid(_)) == matches!(t, Subset::Grid(_)));
        for f in filters().into_iter().filter(|f| f.is_grid() == matches!(s, Subset::Grid(_))) {
            let r = classify(&f, &s);
            if r.is_unknown() {
                continue;
            }
            prop_assert!(r.in_f() != Some(true) || r.in_fplus() == Some(true));
            let c = classify(&f, &s.complement());
            if !c.is_unknown() {
                prop_assert_eq!(r == Region::InFstar, c == Region::InF, "{} on {}", f.kind_name(), s);
            }
            if r == Region::InF {
                prop_assert_eq!(classify(&f, &t), Region::InF);
            }
            if s.is_cofinite() {
                prop_assert_eq!(r, Region::InF);
            }
        }
    }

    #[test]
    fn upset_filters_never_return_unknown(s in arb_up()) {
        for f in filters().into_iter().filter(|f| !f.is_grid()) {
            prop_assert!(!classify(&f, &s.clone().into()).is_unknown());
        }
    }

    #[test]
    fn frechet_is_cofiniteness(a in arb_raw()) {
        let ones = a.cycle().filter(|&n| a.eval(n)).count();
        let expected = if ones == a.period.len() {
            Region::InF
        } else if ones > 0 {
            Region::InFplusOnly
        } else {
            Region::InFstar
        };
        prop_assert_eq!(classify(&FilterSpec::Frechet, &a.up().into()), expected);
    }

    #[test]
    fn dyadic_matches_multiples_scan(a in arb_raw()) {
        let comp = Raw { prefix: a.prefix.iter().map(|b| !b).collect(), period: a.period.iter().map(|b| !b).collect() };
        let expected = match (dyadic_oracle(&a), dyadic_oracle(&comp)) {
            (true, _) => Region::InF,
            (false, true) => Region::InFstar,
            (false, false) => Region::InFplusOnly,
        };
        prop_assert_eq!(classify(&FilterSpec::DyadicChain, &a.up().into()), expected);
    }

    #[test]
    fn finite_gen_matches_intersection_scan(g1 in arb_raw(), g2 in arb_raw(), a in arb_raw()) {
        let gens = [g1, g2];
        let Ok(f) = FilterSpec::finite_gen(gens.iter().map(Raw::up).collect()) else { return Ok(()) };
        prop_assert_eq!(classify(&f, &a.up().into()) == Region::InF, finite_gen_oracle(&gens, &a));
    }

    #[test]
    fn fr_tensor_fr_counts_cofinite_columns(g in common::arb_grid()) {
        // column structure repeats with period ≤ 4 past column 12
        let expected = (12..24).all(|n| g.column(n).is_cofinite());
        prop_assert_eq!(classify(&FilterSpec::FrTensorFr, &g.into()) == Region::InF, expected);
    }
}

#[test]
fn dyadic_basis_is_strictly_decreasing() {
    let f = FilterSpec::DyadicChain;
    for n in 0..10 {
        let (a, b) = (f.basis(n), f.basis(n + 1));
        assert!(b.is_subset(&a) && !a.almost_subset(&b));
        assert_eq!(classify(&f, &b), Region::InF);
    }
}

#[test]
fn single_column_is_outside_fr_tensor_fr() {
    let col: Subset = filter_games::GridSet::lift_rows(&UpSet::omega(), &UpSet::finite([0])).into();
    assert_eq!(classify(&FilterSpec::FrTensorFr, &col), Region::InFstar);
}
