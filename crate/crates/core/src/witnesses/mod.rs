//! Bounded checkers for the combinatorial filter properties, and
//! extractors that read witnesses off strategies.
//!
//! Universal quantifiers over ℱ are sampled over a basis prefix and the
//! sample size is part of every report. Refutations carry a finite
//! counterexample.

mod extract;
mod rules;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::filters::{FilterSpec, Region};
use crate::games::{G1History, G1StrategyII};
use crate::setkit::Subset;

pub use extract::{extract_diag_family, extract_generators, extract_pi_ladder, ExtractError, LadderSource};
pub use rules::{column, BlockFamily, Ladder, Partition, RuleError, SeqRule, SetFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum WitnessVerdict {
    Verified { bound: u64 },
    Refuted { counterexample: Value },
    Open { bound: u64 },
}

impl WitnessVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, WitnessVerdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, WitnessVerdict::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub property: String,
    #[serde(flatten)]
    pub verdict: WitnessVerdict,
    pub audit: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `|x ∩ s_k| ≤ 1` for every block ending at or below `bound`.
pub fn check_selector(x: &Subset, p: &Partition, bound: u64) -> WitnessReport {
    let mut k = 0;
    let mut checked = 0;
    let verdict = loop {
        let Some((lo, hi)) = p.block(k).filter(|&(_, hi)| hi <= bound) else {
            break WitnessVerdict::Verified { bound };
        };
        let hits: Vec<u64> = (lo..hi).filter(|&n| x.contains(n)).collect();
        if hits.len() > 1 {
            break WitnessVerdict::Refuted { counterexample: json!({"block": k, "elements": hits}) };
        }
        checked += 1;
        k += 1;
    };
    WitnessReport {
        property: "selector".into(),
        verdict,
        audit: json!({"partition": p.to_string(), "blocks_checked": checked}),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagMode {
    Plain,
    Plus,
    UniversalF,
    UniversalFplus,
}

/// A diagonalizing family: infinite sets for the plain and plus modes,
/// universal sets of finite blocks for the universal modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagFamily {
    Sets(SetFamily),
    Blocks(BlockFamily),
}

impl From<SetFamily> for DiagFamily {
    fn from(f: SetFamily) -> Self {
        DiagFamily::Sets(f)
    }
}

impl From<BlockFamily> for DiagFamily {
    fn from(f: BlockFamily) -> Self {
        DiagFamily::Blocks(f)
    }
}

/// Samples `basis(0..sample)` and looks for a family member among the
/// first `bound` that diagonalizes each sampled set.
pub fn check_diag(
    family: impl Into<DiagFamily>,
    f: &FilterSpec,
    mode: DiagMode,
    sample: u64,
    bound: u64,
) -> WitnessReport {
    let family = family.into();
    let property = format!("diag:{}", serde_json::to_value(mode).unwrap().as_str().unwrap());
    let audit_base = json!({"sample": sample, "bound": bound});
    let verdict = match (&family, mode) {
        (DiagFamily::Sets(fam), DiagMode::Plain | DiagMode::Plus) => {
            diag_sets(fam, f, mode == DiagMode::Plus, sample, bound)
        }
        (DiagFamily::Blocks(fam), DiagMode::UniversalF | DiagMode::UniversalFplus) => {
            diag_blocks(fam, f, sample, bound)
        }
        _ => WitnessVerdict::Open { bound },
    };
    WitnessReport { property, verdict, audit: audit_base }
}

fn diag_sets(fam: &SetFamily, f: &FilterSpec, plus: bool, sample: u64, bound: u64) -> WitnessVerdict {
    let members: Vec<Subset> = (0..bound).map(|n| fam.member(n)).collect();
    if plus {
        for (n, x) in members.iter().enumerate() {
            match f.classify(x, Default::default()) {
                Ok(Region::InFstar) => {
                    return WitnessVerdict::Refuted {
                        counterexample: json!({"member": n, "set": x.descriptor(), "region": "InFstar"}),
                    }
                }
                Ok(Region::Unknown(_)) | Err(_) => return WitnessVerdict::Open { bound },
                Ok(_) => {}
            }
        }
    }
    // every member of a finite list or a tail family is checked outright
    let exhaustive = match fam {
        SetFamily::Columns => false,
        SetFamily::List(v) => bound >= v.len() as u64,
        SetFamily::Tails(_) => bound >= 1,
    };
    for i in 0..sample {
        let y = f.basis(i);
        if !members.iter().any(|x| x.almost_subset(&y)) {
            return if exhaustive {
                WitnessVerdict::Refuted {
                    counterexample: json!({"basis_index": i, "set": y.descriptor()}),
                }
            } else {
                WitnessVerdict::Open { bound }
            };
        }
    }
    WitnessVerdict::Verified { bound }
}

fn diag_blocks(fam: &BlockFamily, f: &FilterSpec, sample: u64, bound: u64) -> WitnessVerdict {
    let meets = |y: &Subset, lo: u64, hi: u64| y.next_at_or_after(lo).map_or(false, |m| m < hi);
    let inside = |y: &Subset, lo: u64, hi: u64| (lo..hi).all(|m| y.contains(m));
    for i in 0..sample {
        let y = f.basis(i);
        let ok = (0..bound).any(|n| {
            let l = fam.ladder(n);
            let universal = (0..bound).any(|j| l.interval(j).map_or(false, |(a, b)| inside(&y, a, b)));
            let tail = (bound / 2..bound).all(|j| l.interval(j).map_or(false, |(a, b)| meets(&y, a, b)));
            universal && tail
        });
        if !ok {
            return WitnessVerdict::Open { bound };
        }
    }
    WitnessVerdict::Verified { bound }
}

/// Every sampled basis set meets a tail of the ladder intervals
/// `[π_k, π_{k+1})`, `k < interval_count`.
pub fn check_talagrand(
    ladder: &Ladder,
    f: &FilterSpec,
    basis_count: u64,
    interval_count: u64,
) -> Result<WitnessReport, WitnessError> {
    if interval_count == 0 {
        return Err(WitnessError::Precondition("interval count must be positive".into()));
    }
    if ladder.at(0).map_or(true, |p| p < 1) {
        return Err(WitnessError::Precondition("ladder must start at 1 or above".into()));
    }
    for k in 0..interval_count {
        match ladder.interval(k) {
            Some((a, b)) if a < b => {}
            Some(_) => {
                return Err(WitnessError::Precondition(format!("ladder not increasing at {k}")))
            }
            None => return Err(WitnessError::Precondition(format!("ladder undefined at {}", k + 1))),
        }
    }
    let mut tails = Vec::new();
    for i in 0..basis_count {
        let y = f.basis(i);
        let met = |k: u64| {
            let (a, b) = ladder.interval(k).unwrap();
            y.next_at_or_after(a).map_or(false, |m| m < b)
        };
        let tail_start = (0..interval_count).rev().find(|&k| !met(k)).map_or(0, |k| k + 1);
        if tail_start >= interval_count {
            return Ok(WitnessReport {
                property: "talagrand".into(),
                verdict: WitnessVerdict::Refuted {
                    counterexample: json!({"basis_index": i, "interval": interval_count - 1}),
                },
                audit: json!({"ladder": ladder.to_string(), "tail_starts": tails}),
            });
        }
        tails.push(tail_start);
    }
    Ok(WitnessReport {
        property: "talagrand".into(),
        verdict: WitnessVerdict::Verified { bound: interval_count },
        audit: json!({"ladder": ladder.to_string(), "basis_count": basis_count, "tail_starts": tails}),
    })
}

/// Feeds `ms` to `s` one at a time and returns II's replies.
pub(crate) fn g1_replies(s: &dyn G1StrategyII, ms: &[u64]) -> Option<Vec<u64>> {
    let mut h = G1History::default();
    for &m in ms {
        h.ms.push(m);
        let n = s.next_n(&h).ok()?;
        h.ns.push(n);
    }
    Some(h.ns)
}

fn claim_n(s: &dyn G1StrategyII, base: &[u64], bound: u64) -> Option<u64> {
    (0..=bound).find(|&n| {
        (n + 1..=n + bound).all(|m| {
            let mut ms = base.to_vec();
            ms.push(m);
            g1_replies(s, &ms).map_or(false, |ns| *ns.last().unwrap() > m)
        })
    })
}

/// Searches `τ ⊆ (max σ, bound]` (shortest first, then lexicographic) and
/// `n ≤ bound` such that `s(σ⌢τ⌢m) > m` for every `m ∈ (n, n + bound]`.
/// Returns the number of `τ` tried on failure.
pub fn find_claim(s: &dyn G1StrategyII, sigma: &[u64], bound: u64) -> Result<(Vec<u64>, u64), usize> {
    let floor = sigma.iter().max().map_or(0, |&m| m + 1);
    let pool: Vec<u64> = (floor..=bound).collect();
    let mut taus: Vec<Vec<u64>> = (0u64..1 << pool.len())
        .map(|mask| pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect();
    taus.sort_by(|a: &Vec<u64>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for tau in &taus {
        let base = [sigma, tau.as_slice()].concat();
        if let Some(n) = claim_n(s, &base, bound) {
            return Ok((tau.clone(), n));
        }
    }
    Err(taus.len())
}

/// The claim restricted to `τ = ∅`.
pub fn claim_threshold(s: &dyn G1StrategyII, sigma: &[u64], bound: u64) -> Option<u64> {
    claim_n(s, sigma, bound)
}

pub fn check_claim(s: &dyn G1StrategyII, sigma: &[u64], bound: u64) -> WitnessReport {
    let (verdict, audit) = match find_claim(s, sigma, bound) {
        Ok((tau, n)) => (WitnessVerdict::Verified { bound }, json!({"sigma": sigma, "tau": tau, "n": n})),
        Err(tried) => (WitnessVerdict::Open { bound }, json!({"sigma": sigma, "searched_taus": tried})),
    };
    WitnessReport { property: "claim".into(), verdict, audit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::StrategyError;
    use crate::setkit::UpSet;

    #[test]
    fn selector_examples() {
        let p = Partition::new(SeqRule::Linear { a: 0, d: 4 }).unwrap();
        let r = check_selector(&UpSet::evens().into(), &p, 40);
        assert_eq!(r.verdict, WitnessVerdict::Refuted { counterexample: json!({"block": 0, "elements": [0, 2]}) });
        assert!(check_selector(&Subset::empty(), &p, 40).verdict.is_verified());
        let sq = Partition::new(SeqRule::Squares { a: 0 }).unwrap();
        let boundaries = UpSet::finite((0..10).map(|k| k * k));
        assert!(check_selector(&boundaries.into(), &sq, 100).verdict.is_verified());
    }

    #[test]
    fn tensor_columns_diagonalize_but_not_positively() {
        let f = FilterSpec::FrTensorFr;
        for bound in [10, 30, 50] {
            assert!(check_diag(SetFamily::Columns, &f, DiagMode::Plain, 10, bound).verdict.is_verified());
            let plus = check_diag(SetFamily::Columns, &f, DiagMode::Plus, 10, bound);
            assert!(plus.verdict.is_refuted());
        }
        let omega = SetFamily::List(vec![Subset::omega()]);
        assert!(check_diag(omega, &FilterSpec::Frechet, DiagMode::Plain, 10, 5).verdict.is_verified());
    }

    #[test]
    fn talagrand_examples() {
        let pow = Ladder::new(SeqRule::Pow2).unwrap();
        let r = check_talagrand(&pow, &FilterSpec::DyadicChain, 10, 12).unwrap();
        assert!(r.verdict.is_verified());
        let lin = Ladder::new(SeqRule::Linear { a: 1, d: 1 }).unwrap();
        assert!(check_talagrand(&lin, &FilterSpec::Frechet, 10, 30).unwrap().verdict.is_verified());
        let rep = Ladder::unchecked(SeqRule::Explicit(vec![1, 2, 2, 3]));
        assert!(check_talagrand(&rep, &FilterSpec::Frechet, 3, 3).is_err());
    }

    struct Reply(fn(u64) -> u64);
    impl G1StrategyII for Reply {
        fn next_n(&self, h: &G1History) -> Result<u64, StrategyError> {
            Ok((self.0)(*h.ms.last().unwrap()))
        }
        fn describe(&self) -> String {
            "reply".into()
        }
    }

    #[test]
    fn claim_examples() {
        let up = check_claim(&Reply(|m| m + 1), &[], 8);
        assert_eq!(up.audit["tau"], json!([]));
        assert_eq!(up.audit["n"], json!(0));
        let five = check_claim(&Reply(|_| 5), &[], 8);
        assert_eq!(five.verdict, WitnessVerdict::Open { bound: 8 });
    }
}
