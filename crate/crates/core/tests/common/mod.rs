#![allow(dead_code)]

use std::collections::BTreeMap;

use filter_games::{GridSet, Subset, UpSet};
use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A set given by raw prefix and period words, evaluated without the
/// library.
#[derive(Debug, Clone)]
pub struct Raw {
    pub prefix: Vec<bool>,
    pub period: Vec<bool>,
}

impl Raw {
    pub fn eval(&self, n: u64) -> bool {
        let n = n as usize;
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn up(&self) -> UpSet {
        UpSet::new(self.prefix.clone(), self.period.clone()).expect("nonempty period")
    }

    /// Every `n ≥ prefix.len()` repeats a value from this range.
    pub fn cycle(&self) -> std::ops::Range<u64> {
        let p = self.prefix.len() as u64;
        p..p + self.period.len() as u64
    }
}

/// `[0, max prefix + 4·lcm(periods))`, past which both words repeat.
pub fn window(a: &Raw, b: &Raw) -> u64 {
    let l = (a.period.len() as u64).lcm(&(b.period.len() as u64));
    a.prefix.len().max(b.prefix.len()) as u64 + 4 * l
}

/// Residues of the joint period, past both prefixes.
pub fn joint_cycle(a: &Raw, b: &Raw) -> std::ops::Range<u64> {
    let l = (a.period.len() as u64).lcm(&(b.period.len() as u64));
    let h = a.prefix.len().max(b.prefix.len()) as u64;
    h..h + l
}

pub fn random_raw(rng: &mut ChaCha8Rng, max_prefix: usize, max_period: usize) -> Raw {
    let p = rng.gen_range(0..=max_prefix);
    let q = rng.gen_range(1..=max_period);
    let density = rng.gen_range(0.1..0.9);
    Raw {
        prefix: (0..p).map(|_| rng.gen_bool(density)).collect(),
        period: (0..q).map(|_| rng.gen_bool(density)).collect(),
    }
}

pub fn random_up(rng: &mut ChaCha8Rng) -> UpSet {
    random_raw(rng, 16, 12).up()
}

pub fn random_grid(rng: &mut ChaCha8Rng) -> GridSet {
    let mut overrides = BTreeMap::new();
    for _ in 0..rng.gen_range(0..3) {
        overrides.insert(rng.gen_range(0..6), random_raw(rng, 6, 4).up());
    }
    let cols = random_raw(rng, 6, 4).up();
    GridSet::new(cols, random_raw(rng, 6, 4).up(), random_raw(rng, 6, 4).up(), overrides)
}

pub fn arb_raw() -> impl Strategy<Value = Raw> {
    (prop::collection::vec(any::<bool>(), 0..=16), prop::collection::vec(any::<bool>(), 1..=12))
        .prop_map(|(prefix, period)| Raw { prefix, period })
}

pub fn arb_up() -> impl Strategy<Value = UpSet> {
    arb_raw().prop_map(|r| r.up())
}

pub fn arb_grid() -> impl Strategy<Value = GridSet> {
    any::<u64>().prop_map(|seed| random_grid(&mut rand::SeedableRng::seed_from_u64(seed)))
}

pub fn arb_subset() -> impl Strategy<Value = Subset> {
    prop_oneof![arb_up().prop_map(Subset::from), arb_grid().prop_map(Subset::from)]
}

pub mod duality {
    use filter_games::games::{
        run_bounded, GameConfig, History, MoveKind, Mover, Payoff, Player, StrategyError, StrategyI, StrategyII,
    };
    use filter_games::strategies::{
        ChainIntersect, ConstantI, FixedSet, ImageMode, PartitionBlock, RandomII, SigmaDiag, ThresholdI, ThresholdRule,
    };
    use filter_games::transforms::{dualize, Base, DualDirection, Dualized};
    use filter_games::witnesses::{Partition, SeqRule, SetFamily};
    use filter_games::{Depth, FilterSpec, Subset, UpSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// I plays a random residue class: infinite, never cofinite unless
    /// the modulus is 1.
    pub struct ResidueI(pub u64);

    impl StrategyI for ResidueI {
        fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
            let mut rng = ChaCha8Rng::seed_from_u64(self.0 ^ (h.round() as u64) << 32);
            let m = rng.gen_range(1..5);
            Ok(UpSet::residue(m, rng.gen_range(0..m)).into())
        }

        fn describe(&self) -> String {
            format!("residue:{}", self.0)
        }
    }

    /// I plays a random tail.
    pub struct TailI(pub u64);

    impl StrategyI for TailI {
        fn next_move(&self, h: &History) -> Result<Subset, StrategyError> {
            let mut rng = ChaCha8Rng::seed_from_u64(self.0 ^ (h.round() as u64) << 32);
            Ok(UpSet::tail(rng.gen_range(0..40)).into())
        }

        fn describe(&self) -> String {
            format!("tail:{}", self.0)
        }
    }

    pub const DIRECTIONS: [(Player, Mover); 4] =
        [(Player::II, Mover::F), (Player::II, Mover::Fplus), (Player::I, Mover::F), (Player::I, Mover::Fplus)];

    pub fn source(mover: Mover) -> GameConfig {
        GameConfig::new(mover, MoveKind::Element, Payoff::Fcomp, FilterSpec::Frechet)
    }

    pub fn base_ii(mover: Mover, i: usize) -> Box<dyn StrategyII> {
        let fam = |s: &str| SigmaDiag::elements(s.parse::<SetFamily>().unwrap(), MoveKind::Element);
        match (mover, i) {
            (_, 0) => Box::new(FixedSet::least(MoveKind::Element)),
            (Mover::F, 1) => Box::new(FixedSet { x: UpSet::evens().into(), mode: MoveKind::Element }),
            (Mover::F, _) => Box::new(fam("columns")),
            (_, 1) => Box::new(fam("omega")),
            _ => Box::new(SigmaDiag::elements(SetFamily::Tails(Subset::omega()), MoveKind::Element)),
        }
    }

    pub fn base_i(mover: Mover, i: usize) -> Box<dyn StrategyI> {
        match (mover, i) {
            (_, 0) => Box::new(ThresholdI { rule: ThresholdRule::AboveLast { gap: 1 } }),
            (Mover::F, 1) => Box::new(ChainIntersect { filter: FilterSpec::Frechet, subtract: true }),
            (Mover::F, _) => Box::new(PartitionBlock { partition: Partition::new(SeqRule::Squares { a: 0 }).unwrap() }),
            (_, 1) => Box::new(ConstantI(UpSet::evens().into())),
            _ => Box::new(ConstantI(UpSet::residue(3, 1).into())),
        }
    }

    #[derive(Debug)]
    pub struct Replay {
        pub legal: bool,
        /// Shadow moves equal the dual play's moves.
        pub identical: bool,
        /// Shadow sets are legal moves of the source game.
        pub shadow_legal: bool,
        pub flagged: bool,
    }

    /// Plays the dual of base strategy `b` in direction `d` and rebuilds
    /// the source play behind it.
    pub fn replay(d: usize, b: usize, seed: u64, rounds: usize, mode: ImageMode) -> Replay {
        let (side, mover) = DIRECTIONS[d];
        let dir = DualDirection { side, source: source(mover) };
        let (_, target) = dir.target();
        let in_source = |x: &Subset| {
            let r = FilterSpec::Frechet.classify(x, Depth::default()).unwrap();
            match mover {
                Mover::F => r.in_f() == Some(true),
                _ => r.in_fplus() == Some(true),
            }
        };
        match side {
            Player::II => {
                let s = base_ii(mover, b);
                let Dualized::I(dual) = dualize(Base::II(&*s), &dir, mode).unwrap() else { unreachable!() };
                let t = run_bounded(&target, &dual, &RandomII { seed, mode: MoveKind::Element }, rounds, seed).unwrap();
                match dual.shadow(&t) {
                    Ok(sh) => Replay {
                        legal: t.is_legal(),
                        identical: sh.consistent && sh.moves == t.ints(Player::II),
                        shadow_legal: sh.sets.iter().all(in_source),
                        flagged: sh.approx,
                    },
                    Err(_) => Replay { legal: t.is_legal(), identical: false, shadow_legal: false, flagged: true },
                }
            }
            Player::I => {
                let s = base_i(mover, b);
                let Dualized::II(dual) = dualize(Base::I(&*s), &dir, mode).unwrap() else { unreachable!() };
                let opp: Box<dyn StrategyI> =
                    if target.mover == Mover::F { Box::new(TailI(seed)) } else { Box::new(ResidueI(seed)) };
                let t = run_bounded(&target, &*opp, &dual, rounds, seed).unwrap();
                let sh = dual.shadow(&t).unwrap();
                Replay {
                    legal: t.is_legal(),
                    identical: sh.consistent && sh.moves == t.ints(Player::II),
                    shadow_legal: sh.sets.iter().all(in_source),
                    flagged: sh.approx,
                }
            }
        }
    }
}
