//! Computable filter presentations.
//!
//! Every filter here contains the cofinite sets and is Borel, hence meager;
//! ultrafilters and non-meager filters are deliberately absent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::setkit::{parse_set, GridSet, SetError, Subset, UpSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("{kind} filter cannot classify {found}")]
    UniverseMismatch { kind: &'static str, found: String },
    #[error("improper family: intersection of generators is finite")]
    Improper,
    #[error("generator {0} is finite")]
    FiniteGenerator(usize),
    #[error("unknown filter spec `{0}`")]
    UnknownKind(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Where a set sits relative to a filter ℱ: in ℱ, in ℱ⁺ but not ℱ, in the
/// dual ideal ℱ*, or not decided within the search depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    InF,
    InFplusOnly,
    InFstar,
    Unknown(u32),
}

impl Region {
    pub fn in_f(self) -> Option<bool> {
        match self {
            Region::InF => Some(true),
            Region::InFplusOnly | Region::InFstar => Some(false),
            Region::Unknown(_) => None,
        }
    }

    pub fn in_fplus(self) -> Option<bool> {
        match self {
            Region::InF | Region::InFplusOnly => Some(true),
            Region::InFstar => Some(false),
            Region::Unknown(_) => None,
        }
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Region::Unknown(_))
    }
}

/// Bound on existential searches over a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Depth(u32);

impl Depth {
    pub fn new(d: u32) -> Result<Self, FilterError> {
        if d == 0 {
            Err(FilterError::ZeroDepth)
        } else {
            Ok(Depth(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for Depth {
    fn default() -> Self {
        Depth(8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FilterSpec {
    /// Cofinite sets.
    Frechet,
    /// Generated by the listed sets together with the cofinite sets.
    FiniteGen(Vec<UpSet>),
    /// Generated by `Aₙ` = multiples of `2ⁿ`.
    DyadicChain,
    /// `X ⊆ ω×ω` with cofinitely many cofinite columns.
    FrTensorFr,
    /// Every column in the inner filter and cofinitely many columns cofinite.
    ProductInner(Box<FilterSpec>),
}

impl FilterSpec {
    pub fn finite_gen(gens: Vec<UpSet>) -> Result<Self, FilterError> {
        if let Some(i) = gens.iter().position(UpSet::is_finite) {
            return Err(FilterError::FiniteGenerator(i));
        }
        let all = gens.iter().fold(UpSet::omega(), |acc, g| acc.and(g));
        if all.is_finite() {
            return Err(FilterError::Improper);
        }
        Ok(FilterSpec::FiniteGen(gens))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FilterSpec::Frechet => "frechet",
            FilterSpec::FiniteGen(_) => "finitegen",
            FilterSpec::DyadicChain => "dyadic",
            FilterSpec::FrTensorFr => "frtensorfr",
            FilterSpec::ProductInner(_) => "product",
        }
    }

    /// Whether sets of this filter live on ω×ω.
    pub fn is_grid(&self) -> bool {
        matches!(self, FilterSpec::FrTensorFr | FilterSpec::ProductInner(_))
    }

    pub fn classify(&self, s: &Subset, depth: Depth) -> Result<Region, FilterError> {
        match self {
            FilterSpec::Frechet => Ok(match s.card_class() {
                crate::CardClass::Cofinite => Region::InF,
                crate::CardClass::Finite => Region::InFstar,
                crate::CardClass::InfiniteCoinfinite => Region::InFplusOnly,
            }),
            FilterSpec::FiniteGen(_) | FilterSpec::DyadicChain => {
                let up = s.as_up().ok_or_else(|| FilterError::UniverseMismatch {
                    kind: self.kind_name(),
                    found: s.descriptor(),
                })?;
                Ok(self.classify_up(up))
            }
            FilterSpec::FrTensorFr | FilterSpec::ProductInner(_) => {
                let g = s.to_grid();
                let here = self.grid_in_f(&g, depth)?;
                if here == Some(true) {
                    return Ok(Region::InF);
                }
                let there = self.grid_in_f(&g.complement(), depth)?;
                Ok(match (here, there) {
                    (_, Some(true)) => Region::InFstar,
                    (Some(false), Some(false)) => Region::InFplusOnly,
                    _ => Region::Unknown(depth.get()),
                })
            }
        }
    }

    fn classify_up(&self, s: &UpSet) -> Region {
        let in_f = |x: &UpSet| self.up_in_f(x);
        if in_f(s) {
            Region::InF
        } else if in_f(&s.complement()) {
            Region::InFstar
        } else {
            Region::InFplusOnly
        }
    }

    fn up_in_f(&self, s: &UpSet) -> bool {
        match self {
            FilterSpec::Frechet => s.is_cofinite(),
            FilterSpec::FiniteGen(gens) => gens
                .iter()
                .fold(UpSet::omega(), |acc, g| acc.and(g))
                .almost_subset(s),
            FilterSpec::DyadicChain => {
                // residues of multiples of 2ⁿ modulo the period stop changing
                // once n reaches the period's 2-adic valuation
                let v2 = s.period_len().trailing_zeros() as u64;
                (0..=v2 + 1).any(|n| UpSet::multiples(1 << n).almost_subset(s))
            }
            FilterSpec::FrTensorFr | FilterSpec::ProductInner(_) => {
                unreachable!("grid filters classify through grid_in_f")
            }
        }
    }

    fn grid_in_f(&self, g: &GridSet, depth: Depth) -> Result<Option<bool>, FilterError> {
        let cofinite_cols = g.columns_where(UpSet::is_cofinite);
        if !cofinite_cols.is_cofinite() {
            return Ok(Some(false));
        }
        match self {
            FilterSpec::FrTensorFr => Ok(Some(true)),
            FilterSpec::ProductInner(inner) => {
                let mut verdict = Some(true);
                for col in g.distinct_columns() {
                    match inner.classify(&Subset::Up(col), depth)?.in_f() {
                        Some(true) => {}
                        Some(false) => return Ok(Some(false)),
                        None => verdict = None,
                    }
                }
                Ok(verdict)
            }
            _ => unreachable!("only grid filters reach grid_in_f"),
        }
    }

    /// The `i`-th basis set; every one classifies in ℱ.
    pub fn basis(&self, i: u64) -> Subset {
        match self {
            FilterSpec::Frechet => UpSet::tail(i).into(),
            FilterSpec::DyadicChain => UpSet::multiples(1u64 << i.min(62))
                .and(&UpSet::tail(i))
                .into(),
            FilterSpec::FiniteGen(gens) => {
                if gens.is_empty() {
                    return UpSet::tail(i).into();
                }
                let g = gens.len() as u64;
                gens[(i % g) as usize].and(&UpSet::tail(i / g)).into()
            }
            FilterSpec::FrTensorFr => {
                GridSet::lift_rows(&UpSet::tail(i), &UpSet::tail(i)).into()
            }
            FilterSpec::ProductInner(inner) => {
                let inner_set = match inner.basis(i) {
                    Subset::Up(u) => u,
                    // nested grids fall back to the cofinite tail, which is
                    // in every inner filter
                    Subset::Grid(_) => UpSet::tail(i),
                };
                GridSet::new(
                    UpSet::tail(i),
                    UpSet::tail(i),
                    inner_set,
                    Default::default(),
                )
                .into()
            }
        }
    }

    /// Intersection of `basis(0..k)`; ω for `k = 0`.
    pub fn basis_meet(&self, k: u64) -> Subset {
        (0..k).fold(Subset::omega(), |acc, i| acc.and(&self.basis(i)))
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::FiniteGen(gens) => {
                let parts: Vec<String> = gens.iter().map(UpSet::descriptor).collect();
                write!(f, "finitegen:{}", parts.join(","))
            }
            FilterSpec::ProductInner(inner) => write!(f, "product:{inner}"),
            other => f.write_str(other.kind_name()),
        }
    }
}

impl FromStr for FilterSpec {
    type Err = FilterError;

    /// `frechet`, `dyadic`, `frtensorfr`, `product:<inner>`,
    /// `finitegen:<set>[,<set>]*`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "frechet" => return Ok(FilterSpec::Frechet),
            "dyadic" => return Ok(FilterSpec::DyadicChain),
            "frtensorfr" => return Ok(FilterSpec::FrTensorFr),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("product:") {
            return Ok(FilterSpec::ProductInner(Box::new(inner.parse()?)));
        }
        if let Some(list) = s.strip_prefix("finitegen:") {
            let mut gens = Vec::new();
            if !list.is_empty() {
                for part in list.split(',') {
                    match parse_set(part)? {
                        Subset::Up(u) => gens.push(u),
                        Subset::Grid(_) => {
                            return Err(FilterError::UnknownKind(format!(
                                "grid generator `{part}`"
                            )))
                        }
                    }
                }
            }
            return FilterSpec::finite_gen(gens);
        }
        Err(FilterError::UnknownKind(s.to_string()))
    }
}

impl Serialize for FilterSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FilterSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
