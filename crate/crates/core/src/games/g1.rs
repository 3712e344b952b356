use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{EngineError, GameConfig, Header, MoveValue, Player, StrategyError, Transcript};
use crate::filters::FilterSpec;

/// Integer history of 𝔊₁: I has named `ms`, II answered with `ns`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct G1History {
    pub seed: u64,
    pub ms: Vec<u64>,
    pub ns: Vec<u64>,
}

impl G1History {
    pub fn round(&self) -> usize {
        self.ns.len()
    }
}

pub trait G1StrategyI {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError>;
    fn describe(&self) -> String;
}

pub trait G1StrategyII {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError>;
    fn describe(&self) -> String;
}

impl<T: G1StrategyI + ?Sized> G1StrategyI for Box<T> {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError> {
        (**self).next_m(h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<T: G1StrategyI + ?Sized> G1StrategyI for &T {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError> {
        (**self).next_m(h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<T: G1StrategyII + ?Sized> G1StrategyII for Box<T> {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        (**self).next_n(h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<T: G1StrategyII + ?Sized> G1StrategyII for &T {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        (**self).next_n(h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// II answers one past the larger of I's integer and II's last reply.
#[derive(Debug, Clone, Copy)]
pub struct NextAbove;

impl G1StrategyII for NextAbove {
    fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
        let m = *h.ms.last().ok_or_else(|| StrategyError::Incompatible("II asked to move before I".into()))?;
        Ok(m.max(h.ns.last().copied().unwrap_or(0)) + 1)
    }

    fn describe(&self) -> String {
        "above".into()
    }
}

/// II always answers `c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstReply(pub u64);

impl G1StrategyII for ConstReply {
    fn next_n(&self, _h: &G1History) -> Result<u64, StrategyError> {
        Ok(self.0)
    }

    fn describe(&self) -> String {
        format!("const:{}", self.0)
    }
}

/// I names `m_k = a + d·k`, or one past II's last reply plus `d` when
/// `a` is `None`.
#[derive(Debug, Clone, Copy)]
pub struct G1Threshold {
    pub a: Option<u64>,
    pub d: u64,
}

impl G1StrategyI for G1Threshold {
    fn next_m(&self, h: &G1History) -> Result<u64, StrategyError> {
        Ok(match self.a {
            Some(a) => a + self.d * h.round() as u64,
            None => h.ns.last().map_or(0, |n| n + 1) + self.d,
        })
    }

    fn describe(&self) -> String {
        match self.a {
            Some(a) => format!("linear:{a}+{}k", self.d),
            None => format!("above:{}", self.d),
        }
    }
}

/// II's three winning conditions read off a finite play.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct G1Flags {
    /// First round where `n_k ≤ n_{k−1}`; the increase condition fails
    /// for good from there.
    pub increase_broken_at: Option<usize>,
    /// Rounds with `m_k < n_k`.
    pub exceed_count: usize,
    pub outcome: BTreeSet<u64>,
}

impl Transcript {
    pub fn g1_flags(&self) -> G1Flags {
        let ms = self.ints(Player::I);
        let ns = self.ints(Player::II);
        G1Flags {
            increase_broken_at: (1..ns.len()).find(|&k| ns[k] <= ns[k - 1]),
            exceed_count: ms.iter().zip(&ns).filter(|(m, n)| m < n).count(),
            outcome: ns.into_iter().collect(),
        }
    }
}

pub fn run_g1(
    filter: &FilterSpec,
    s_i: &dyn G1StrategyI,
    s_ii: &dyn G1StrategyII,
    rounds: usize,
    seed: u64,
) -> Result<Transcript, EngineError> {
    if rounds == 0 {
        return Err(EngineError::ZeroRounds);
    }
    let mut t = Transcript::new(Header {
        config: GameConfig::g1(filter.clone()),
        seed,
        rounds,
        strategy_i: s_i.describe(),
        strategy_ii: s_ii.describe(),
    });
    let mut h = G1History { seed, ..Default::default() };
    for _ in 0..rounds {
        match s_i.next_m(&h) {
            Ok(m) => {
                t.push(Player::I, Some(MoveValue::Int(m)), true, None);
                h.ms.push(m);
            }
            Err(e) => {
                t.push(Player::I, None, false, Some(e.to_string()));
                break;
            }
        }
        match s_ii.next_n(&h) {
            Ok(n) => {
                t.push(Player::II, Some(MoveValue::Int(n)), true, None);
                h.ns.push(n);
            }
            Err(e) => {
                t.push(Player::II, None, false, Some(e.to_string()));
                break;
            }
        }
    }
    Ok(t)
}
