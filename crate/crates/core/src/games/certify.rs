use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::{MoveKind, Payoff, Player, Transcript};
use crate::filters::Region;
use crate::setkit::{Subset, UpSet};
use crate::strategies::sigma;
use crate::witnesses::{check_diag, check_talagrand, DiagMode, Ladder, Partition, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictTag {
    WinI,
    WinII,
    /// No certificate settles the play after this many rounds.
    Undetermined(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    /// The argument that turns the checked prefix invariant into a verdict
    /// on the infinite outcome.
    pub soundness: String,
    pub holds: bool,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub certificate: Option<Certificate>,
}

/// Named prefix invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certifier {
    /// Only settles plays that ended by forfeit.
    Forfeit,
    /// I avoids every block II has touched; with a partition admitting no
    /// selector in ℱ⁺ the outcome stays out of ℱ⁺.
    PartitionSelector { partition: Partition, witness_asserted: bool },
    /// II plays whole ladder intervals beyond the round index.
    Interval { ladder: Ladder },
    /// II only plays members of `x`.
    FixedSet { x: Subset },
    /// II's `k`-th element lies in `X_{σ(k)} ∩ Y_k ∖ k`.
    SigmaDiag { family: SetFamily },
    /// I's `k`-th move lies inside `basis(0..k) ∖ k`.
    ChainSubtract,
}

impl Certifier {
    pub fn name(&self) -> &'static str {
        match self {
            Certifier::Forfeit => "forfeit",
            Certifier::PartitionSelector { .. } => "partition-selector",
            Certifier::Interval { .. } => "interval",
            Certifier::FixedSet { .. } => "fixed-set",
            Certifier::SigmaDiag { .. } => "sigma-diag",
            Certifier::ChainSubtract => "chain-subtract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("certifier {certifier} does not apply to game {game}")]
    Incompatible { certifier: &'static str, game: String },
}

/// What a certificate tells us about the infinite outcome.
#[derive(Default)]
struct Knowledge {
    in_f: Option<bool>,
    in_fplus: Option<bool>,
}

impl Knowledge {
    fn fplus(b: bool) -> Self {
        Knowledge { in_fplus: Some(b), in_f: (!b).then_some(false) }
    }

    fn f(b: bool) -> Self {
        Knowledge { in_f: Some(b), in_fplus: b.then_some(true) }
    }

    fn decide(&self, payoff: Payoff) -> Option<VerdictTag> {
        let ii_wins = match payoff {
            Payoff::F => self.in_f?,
            Payoff::Fcomp => !self.in_f?,
            Payoff::Fplus => self.in_fplus?,
            Payoff::Fstar => !self.in_fplus?,
        };
        Some(if ii_wins { VerdictTag::WinII } else { VerdictTag::WinI })
    }
}

pub fn certify_outcome(t: &Transcript, certifier: &Certifier) -> Result<Verdict, CertifyError> {
    let config = &t.header.config;
    let incompatible = || CertifyError::Incompatible {
        certifier: certifier.name(),
        game: config.game_text(),
    };
    let needs = |kind: MoveKind| if config.move_kind == kind { Ok(()) } else { Err(incompatible()) };
    match certifier {
        Certifier::PartitionSelector { .. } | Certifier::SigmaDiag { .. } | Certifier::ChainSubtract => {
            needs(MoveKind::Element)?
        }
        Certifier::Interval { .. } => needs(MoveKind::FiniteBlock)?,
        Certifier::Forfeit | Certifier::FixedSet { .. } => {}
    }

    if let Some(r) = t.first_violation() {
        let tag = match r.player {
            Player::I => VerdictTag::WinII,
            Player::II => VerdictTag::WinI,
        };
        return Ok(Verdict {
            tag,
            certificate: Some(Certificate {
                name: "forfeit".into(),
                soundness: "the first player to make an illegal move loses".into(),
                holds: true,
                data: json!({"player": r.player, "k": r.k, "reason": r.reason}),
            }),
        });
    }
    let n = t.rounds_played();
    if n == 0 || *certifier == Certifier::Forfeit {
        return Ok(Verdict { tag: VerdictTag::Undetermined(n), certificate: None });
    }

    let (soundness, holds, data, knowledge) = match certifier {
        Certifier::Forfeit => unreachable!(),
        Certifier::PartitionSelector { partition, witness_asserted } => {
            let (holds, data) = partition_invariant(t, partition);
            let k = if *witness_asserted { Knowledge::fplus(false) } else { Knowledge::default() };
            (
                "each of I's moves omits every block II has touched, so the outcome meets every \
                 block at most once; a partition with no such selector in F+ keeps the outcome out of F+",
                holds,
                json!({"partition": partition.to_string(), "witness_asserted": witness_asserted, "audit": data}),
                k,
            )
        }
        Certifier::Interval { ladder } => {
            let (ok_moves, complete, first_bad) = interval_invariant(t, ladder);
            let report = check_talagrand(ladder, &config.filter, 10, 12);
            let meager_ok = report.as_ref().map_or(false, |r| r.verdict.is_verified());
            let holds = ok_moves && 4 * complete >= n && meager_ok;
            (
                "II's moves are whole ladder intervals; every filter set meets all but finitely many \
                 ladder intervals, so an outcome containing infinitely many of them is in F+",
                holds,
                json!({"ladder": ladder.to_string(), "complete_intervals": complete,
                       "first_bad_round": first_bad, "ladder_meets_basis": meager_ok}),
                Knowledge::fplus(true),
            )
        }
        Certifier::FixedSet { x } => {
            let outside: Vec<u64> = t.outcome().into_iter().filter(|&m| !x.contains(m)).collect();
            let region = config.filter.classify(x, config.depth).ok();
            let k = match region {
                Some(Region::InFstar) => Knowledge::fplus(false),
                Some(Region::InFplusOnly) => Knowledge::f(false),
                _ => Knowledge::default(),
            };
            (
                "every outcome is a subset of x, and membership outside F (or in the dual ideal) \
                 passes to subsets",
                outside.is_empty(),
                json!({"x": x.descriptor(), "region": region, "outside": outside}),
                k,
            )
        }
        Certifier::SigmaDiag { family } => {
            let first_bad = sigma_invariant(t, family);
            let report = check_diag(family.clone(), &config.filter, DiagMode::Plain, 10, 50);
            let diag_ok = report.verdict.is_verified();
            (
                "II's outcome meets every family member infinitely often, and every filter set \
                 almost contains some member, so the outcome is in F+",
                first_bad.is_none() && diag_ok,
                json!({"family": family.to_string(), "first_bad_round": first_bad, "family_diagonalizes": diag_ok}),
                Knowledge::fplus(true),
            )
        }
        Certifier::ChainSubtract => {
            let first_bad = chain_invariant(t);
            (
                "the outcome is almost contained in every basis set, hence meets every filter set \
                 in an infinite set and lies in F+",
                first_bad.is_none(),
                json!({"first_bad_round": first_bad}),
                Knowledge::fplus(true),
            )
        }
    };
    let tag = if holds { knowledge.decide(config.payoff) } else { None };
    Ok(Verdict {
        tag: tag.unwrap_or(VerdictTag::Undetermined(n)),
        certificate: Some(Certificate {
            name: certifier.name().into(),
            soundness: soundness.into(),
            holds,
            data,
        }),
    })
}

fn partition_invariant(t: &Transcript, p: &Partition) -> (bool, Value) {
    let xs = t.i_sets();
    let ns = t.ints(Player::II);
    let mut touched = BTreeSet::new();
    for (k, x) in xs.iter().enumerate().take(ns.len()) {
        for &b in &touched {
            let (lo, hi) = p.block(b).expect("touched blocks are defined");
            if x.next_at_or_after(lo).map_or(false, |y| y < hi) {
                return (false, json!({"round": k, "overlaps_block": b}));
            }
        }
        match p.block_of(ns[k]) {
            Some(b) if touched.insert(b) => {}
            Some(b) => return (false, json!({"round": k, "repeat_block": b})),
            None => return (false, json!({"round": k, "block_undefined": ns[k]})),
        }
    }
    (true, json!({"blocks_touched": touched.len()}))
}

/// `(all moves are intervals beyond their round, distinct complete
/// intervals in the outcome, first offending round)`.
fn interval_invariant(t: &Transcript, ladder: &Ladder) -> (bool, usize, Option<usize>) {
    let mut first_bad = None;
    let mut seen = BTreeSet::new();
    for (l, s) in t.ii_moves().iter().enumerate() {
        let elems = s.elements();
        let lo = elems[0];
        let hi = elems[elems.len() - 1] + 1;
        let k = ladder.first_at_or_above(lo);
        let ok = k.map_or(false, |k| {
            ladder.interval(k) == Some((lo, hi)) && elems.len() as u64 == hi - lo && k > l as u64
        });
        if ok {
            seen.insert(lo);
        } else if first_bad.is_none() {
            first_bad = Some(l);
        }
    }
    (first_bad.is_none(), seen.len(), first_bad)
}

fn sigma_invariant(t: &Transcript, family: &SetFamily) -> Option<usize> {
    let xs = t.i_sets();
    let ns = t.ints(Player::II);
    ns.iter().enumerate().position(|(k, &n)| {
        !(family.member(sigma(k as u64)).contains(n) && xs[k].contains(n) && n >= k as u64)
    })
}

fn chain_invariant(t: &Transcript) -> Option<usize> {
    let f = &t.header.config.filter;
    t.i_sets().iter().enumerate().position(|(k, x)| {
        let bound = f.basis_meet(k as u64).diff(&UpSet::interval(0, k as u64).into());
        !x.is_subset(&bound)
    })
}
