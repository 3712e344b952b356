use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::setkit::{GridSet, SetError, Subset, UpSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("cannot parse sequence rule `{0}`")]
    Syntax(String),
    #[error("sequence is not strictly increasing at index {0}")]
    NotIncreasing(u64),
    #[error("partition boundaries must start at 0")]
    NonzeroStart,
    #[error("ladder must start at 1 or above")]
    LadderStart,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// An integer sequence given by a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqRule {
    /// `a + k²`
    Squares { a: u64 },
    /// `2ᵏ`
    Pow2,
    /// `a + d·k`
    Linear { a: u64, d: u64 },
    /// A finite list; undefined past its end.
    Explicit(Vec<u64>),
}

impl SeqRule {
    pub fn at(&self, k: u64) -> Option<u64> {
        match self {
            SeqRule::Squares { a } => k.checked_mul(k).and_then(|x| x.checked_add(*a)),
            SeqRule::Pow2 => (k < 63).then(|| 1u64 << k),
            SeqRule::Linear { a, d } => d.checked_mul(k).and_then(|x| x.checked_add(*a)),
            SeqRule::Explicit(v) => v.get(k as usize).copied(),
        }
    }

    /// Number of defined terms, `None` for unbounded rules.
    pub fn len(&self) -> Option<u64> {
        match self {
            SeqRule::Explicit(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    /// First index `k < upto` with `at(k+1) ≤ at(k)`.
    pub fn first_non_increase(&self, upto: u64) -> Option<u64> {
        (0..upto).find(|&k| match (self.at(k), self.at(k + 1)) {
            (Some(a), Some(b)) => b <= a,
            _ => false,
        })
    }
}

impl fmt::Display for SeqRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqRule::Squares { a: 0 } => f.write_str("k^2"),
            SeqRule::Squares { a } => write!(f, "{a}+k^2"),
            SeqRule::Pow2 => f.write_str("2^k"),
            SeqRule::Linear { a, d } => write!(f, "{a}+{d}k"),
            SeqRule::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

impl FromStr for SeqRule {
    type Err = RuleError;

    /// `k^2`, `<a>+k^2`, `2^k`, `k`, `<a>+<d>k`, or `n0;n1;…`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RuleError::Syntax(s.to_string());
        match s {
            "k^2" => return Ok(SeqRule::Squares { a: 0 }),
            "2^k" => return Ok(SeqRule::Pow2),
            "k" => return Ok(SeqRule::Linear { a: 0, d: 1 }),
            _ => {}
        }
        if let Some(a) = s.strip_suffix("+k^2") {
            return Ok(SeqRule::Squares { a: a.parse().map_err(|_| bad())? });
        }
        if let Some(body) = s.strip_suffix('k') {
            let (a, d) = body.split_once('+').ok_or_else(bad)?;
            let a = a.parse().map_err(|_| bad())?;
            let d = if d.is_empty() { 1 } else { d.parse().map_err(|_| bad())? };
            return Ok(SeqRule::Linear { a, d });
        }
        let v = s
            .split(';')
            .map(|p| p.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SeqRule::Explicit(v))
    }
}

/// Interval partition with blocks `s_k = [b_k, b_{k+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    b: SeqRule,
}

impl Partition {
    pub fn new(b: SeqRule) -> Result<Self, RuleError> {
        if b.at(0) != Some(0) {
            return Err(RuleError::NonzeroStart);
        }
        let probe = b.len().map_or(64, |l| l.saturating_sub(1));
        if let Some(k) = b.first_non_increase(probe) {
            return Err(RuleError::NotIncreasing(k));
        }
        Ok(Partition { b })
    }

    pub fn rule(&self) -> &SeqRule {
        &self.b
    }

    pub fn boundary(&self, k: u64) -> Option<u64> {
        self.b.at(k)
    }

    /// `[b_k, b_{k+1})`.
    pub fn block(&self, k: u64) -> Option<(u64, u64)> {
        Some((self.b.at(k)?, self.b.at(k + 1)?))
    }

    /// Index of the block containing `n`.
    pub fn block_of(&self, n: u64) -> Option<u64> {
        let (mut lo, mut hi) = (0u64, 1u64);
        while self.b.at(hi)? <= n {
            lo = hi;
            hi = hi.checked_mul(2)?;
        }
        // b_lo ≤ n < b_hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.b.at(mid)? <= n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={}", self.b)
    }
}

/// Strictly increasing `π_0 < π_1 < …` with `π_0 ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ladder {
    pi: SeqRule,
}

impl Ladder {
    pub fn new(pi: SeqRule) -> Result<Self, RuleError> {
        if pi.at(0).map_or(true, |p| p < 1) {
            return Err(RuleError::LadderStart);
        }
        let probe = pi.len().map_or(62, |l| l.saturating_sub(1));
        if let Some(k) = pi.first_non_increase(probe) {
            return Err(RuleError::NotIncreasing(k));
        }
        Ok(Ladder { pi })
    }

    /// A ladder built from a rule without validation; checkers report
    /// the precondition themselves.
    pub fn unchecked(pi: SeqRule) -> Self {
        Ladder { pi }
    }

    pub fn rule(&self) -> &SeqRule {
        &self.pi
    }

    pub fn at(&self, k: u64) -> Option<u64> {
        self.pi.at(k)
    }

    /// `[π_k, π_{k+1})`.
    pub fn interval(&self, k: u64) -> Option<(u64, u64)> {
        Some((self.pi.at(k)?, self.pi.at(k + 1)?))
    }

    /// Least `k` with `π_k ≥ n`.
    pub fn first_at_or_above(&self, n: u64) -> Option<u64> {
        (0u64..).take_while(|&k| self.pi.at(k).is_some()).find(|&k| self.pi.at(k).unwrap() >= n)
    }

    /// Explicit copy of the first `n` terms.
    pub fn truncated(&self, n: u64) -> Ladder {
        Ladder { pi: SeqRule::Explicit((0..n).map_while(|k| self.pi.at(k)).collect()) }
    }

    /// `(a, d)` when `π_k = a + d·k`.
    pub fn arithmetic(&self) -> Option<(u64, u64)> {
        match &self.pi {
            SeqRule::Linear { a, d } => Some((*a, *d)),
            _ => None,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi={}", self.pi)
    }
}

/// `{n} × ω` flattened through the pairing.
pub fn column(n: u64) -> Subset {
    GridSet::lift_rows(&UpSet::omega(), &UpSet::finite([n])).into()
}

/// A countable family `⟨X_n⟩` of infinite sets, given by a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetFamily {
    /// `X_n = {n} × ω`.
    Columns,
    /// `X_n = list[n mod len]`.
    List(Vec<Subset>),
    /// `X_n = x ∖ [0, n)`.
    Tails(Subset),
}

impl SetFamily {
    pub fn member(&self, n: u64) -> Subset {
        match self {
            SetFamily::Columns => column(n),
            SetFamily::List(v) => v[(n % v.len() as u64) as usize].clone(),
            SetFamily::Tails(x) => x.diff(&UpSet::interval(0, n).into()),
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetFamily::Columns => f.write_str("columns"),
            SetFamily::List(v) => {
                let parts: Vec<String> = v.iter().map(Subset::descriptor).collect();
                write!(f, "list:{}", parts.join("|"))
            }
            SetFamily::Tails(x) => write!(f, "tails:{x}"),
        }
    }
}

impl FromStr for SetFamily {
    type Err = RuleError;

    /// `columns`, `omega`, `list:<set>|<set>…`, `tails:<set>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "columns" {
            return Ok(SetFamily::Columns);
        }
        if s == "omega" {
            return Ok(SetFamily::List(vec![Subset::omega()]));
        }
        if let Some(rest) = s.strip_prefix("list:") {
            let v = rest.split('|').map(str::parse).collect::<Result<Vec<Subset>, _>>()?;
            if v.is_empty() {
                return Err(RuleError::UnknownFamily(s.into()));
            }
            return Ok(SetFamily::List(v));
        }
        if let Some(rest) = s.strip_prefix("tails:") {
            return Ok(SetFamily::Tails(rest.parse()?));
        }
        Err(RuleError::UnknownFamily(s.into()))
    }
}

/// A countable family of universal sets; member `n` is the collection of
/// ladder intervals `{[π_j, π_{j+1}) : j}` of ladder `n mod len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockFamily {
    pub ladders: Vec<Ladder>,
}

impl BlockFamily {
    pub fn ladder(&self, n: u64) -> &Ladder {
        &self.ladders[(n % self.ladders.len() as u64) as usize]
    }
}

impl Serialize for SeqRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeqRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
