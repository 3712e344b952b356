//! Strategy spec strings, e.g. `partition:b=k^2`, `chain:subtract`,
//! `fixed:<set>`, `sigma:family=columns`, `interval:pi=2^k`,
//! `tree:<tree spec>`, `random:seed=7`.

use thiserror::Error;

use super::basic::{
    ChainIntersect, ConstantI, FixedSet, IntervalStrategy, PartitionBlock, RandomI, RandomII, ScriptedI,
    ScriptedII, SigmaDiag, ThresholdI, ThresholdRule,
};
use super::tree::{TreeStrategyI, TreeStrategyII};
use super::ImageMode;
use crate::filters::FilterSpec;
use crate::games::{
    ConstReply, G1StrategyI, G1StrategyII, G1Threshold, GameConfig, IIMove, MoveKind, Mover, NextAbove, StrategyI,
    StrategyII,
};
use crate::setkit::{SetError, Subset};
use crate::trees::{tree_from_strategy_ii, FTree, TreeBuildError, TreeError, TreeSpec};
use crate::witnesses::{BlockFamily, Ladder, Partition, RuleError, SetFamily};

/// Depth and width used when a tree spec is read off a strategy.
pub const TREE_DEPTH: usize = 4;
pub const TREE_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("unknown strategy spec `{0}`")]
    Unknown(String),
    #[error("bad argument in `{spec}`: {detail}")]
    Argument { spec: String, detail: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Build(#[from] TreeBuildError),
}

fn arg(spec: &str, detail: impl ToString) -> SpecError {
    SpecError::Argument { spec: spec.into(), detail: detail.to_string() }
}

fn seed_of(spec: &str, rest: &str) -> Result<(u64, Option<FilterSpec>), SpecError> {
    let mut seed = None;
    let mut basis = None;
    for part in rest.split(';') {
        match part.split_once('=') {
            Some(("seed", v)) => seed = Some(v.parse().map_err(|e| arg(spec, e))?),
            Some(("basis", v)) => basis = Some(v.parse().map_err(|e| arg(spec, e))?),
            _ => return Err(arg(spec, format!("unexpected `{part}`"))),
        }
    }
    Ok((seed.ok_or_else(|| arg(spec, "missing seed"))?, basis))
}

/// Builds the tree named by a tree spec; `const:` and `fromstrategy:`
/// trees use the game's filter.
pub fn build_tree(text: &str, config: &GameConfig) -> Result<FTree, SpecError> {
    Ok(match text.parse::<TreeSpec>()? {
        TreeSpec::Chain(f) => FTree::chain(f),
        TreeSpec::Interval(l) => FTree::interval(l),
        TreeSpec::Constant(x) => FTree::constant(x, config.filter.clone()),
        TreeSpec::FromStrategy(s) => {
            let ii = parse_strategy_ii(&s, config)?;
            tree_from_strategy_ii(&ii, &config.filter, TREE_DEPTH, TREE_WIDTH, ImageMode::Exact)?.tree
        }
    })
}

pub fn parse_strategy_i(spec: &str, config: &GameConfig) -> Result<Box<dyn StrategyI>, SpecError> {
    let spec = spec.trim();
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match (head, rest) {
        ("partition", r) => {
            let b = r.strip_prefix("b=").ok_or_else(|| arg(spec, "expected b=<rule>"))?;
            Box::new(PartitionBlock { partition: Partition::new(b.parse()?)? })
        }
        ("chain", "") => Box::new(ChainIntersect { filter: config.filter.clone(), subtract: false }),
        ("chain", "subtract") => Box::new(ChainIntersect { filter: config.filter.clone(), subtract: true }),
        ("const", x) => Box::new(ConstantI(x.parse()?)),
        ("tail", r) => {
            let rule = match r.parse::<u64>() {
                Ok(c) => ThresholdRule::Fixed(c),
                Err(_) => ThresholdRule::Seq(r.parse()?),
            };
            Box::new(ThresholdI { rule })
        }
        ("above", g) => Box::new(ThresholdI { rule: ThresholdRule::AboveLast { gap: g.parse().map_err(|e| arg(spec, e))? } }),
        ("random", r) => {
            let (seed, basis) = seed_of(spec, r)?;
            let basis = basis.or_else(|| matches!(config.mover, Mover::F | Mover::Fplus).then(|| config.filter.clone()));
            Box::new(RandomI { seed, basis })
        }
        ("script", r) => {
            let sets = r.split('|').map(str::parse).collect::<Result<Vec<Subset>, _>>()?;
            Box::new(ScriptedI(sets))
        }
        ("tree", t) => Box::new(TreeStrategyI { tree: build_tree(t, config)? }),
        _ => return Err(SpecError::Unknown(spec.into())),
    })
}

pub fn parse_strategy_ii(spec: &str, config: &GameConfig) -> Result<Box<dyn StrategyII>, SpecError> {
    let spec = spec.trim();
    let mode = config.move_kind;
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match (head, rest) {
        ("least", "") => Box::new(FixedSet::least(mode)),
        ("fixed", x) => Box::new(FixedSet { x: x.parse()?, mode }),
        ("sigma", r) => {
            if let Some(fam) = r.strip_prefix("family=") {
                Box::new(SigmaDiag::elements(fam.parse::<SetFamily>()?, mode))
            } else if let Some(ls) = r.strip_prefix("universal=") {
                let ladders = ls
                    .split('|')
                    .map(|l| Ladder::new(l.parse()?))
                    .collect::<Result<Vec<_>, RuleError>>()?;
                if mode != MoveKind::FiniteBlock {
                    return Err(arg(spec, "universal families need block moves"));
                }
                Box::new(SigmaDiag::universal(BlockFamily { ladders }))
            } else {
                return Err(arg(spec, "expected family=<family> or universal=<rule>|…"));
            }
        }
        ("interval", r) => {
            let pi = r.strip_prefix("pi=").ok_or_else(|| arg(spec, "expected pi=<rule>"))?;
            Box::new(IntervalStrategy { ladder: Ladder::new(pi.parse()?)? })
        }
        ("random", r) => {
            let (seed, basis) = seed_of(spec, r)?;
            if basis.is_some() {
                return Err(arg(spec, "basis applies to I only"));
            }
            Box::new(RandomII { seed, mode })
        }
        ("script", r) => {
            let moves = r
                .split('|')
                .map(|m| {
                    let v = m.split(',').map(|t| t.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>();
                    let v = v.map_err(|e| arg(spec, e))?;
                    Ok(match (mode, v.as_slice()) {
                        (MoveKind::Element, [n]) => IIMove::Element(*n),
                        (MoveKind::Element, _) => return Err(arg(spec, "element games take one number per move")),
                        (MoveKind::FiniteBlock, _) => IIMove::block(v),
                    })
                })
                .collect::<Result<Vec<_>, SpecError>>()?;
            Box::new(ScriptedII(moves))
        }
        ("tree", t) => Box::new(TreeStrategyII { tree: build_tree(t, config)?, mode }),
        _ => return Err(SpecError::Unknown(spec.into())),
    })
}

/// 𝔊₁ strategies for I: `above:<d>` names one past II's last reply plus
/// `d`; `linear:<a>+<d>k` names `a + d·k`.
pub fn parse_g1_strategy_i(spec: &str) -> Result<Box<dyn G1StrategyI>, SpecError> {
    let spec = spec.trim();
    let num = |v: &str| v.parse::<u64>().map_err(|e| arg(spec, e));
    if let Some(d) = spec.strip_prefix("above:") {
        return Ok(Box::new(G1Threshold { a: None, d: num(d)? }));
    }
    if let Some(r) = spec.strip_prefix("linear:") {
        let (a, d) = r
            .strip_suffix('k')
            .and_then(|r| r.split_once('+'))
            .ok_or_else(|| arg(spec, "expected linear:<a>+<d>k"))?;
        return Ok(Box::new(G1Threshold { a: Some(num(a)?), d: num(d)? }));
    }
    Err(SpecError::Unknown(spec.into()))
}

/// 𝔊₁ strategies for II: `above` or `const:<c>`.
pub fn parse_g1_strategy_ii(spec: &str) -> Result<Box<dyn G1StrategyII>, SpecError> {
    let spec = spec.trim();
    if spec == "above" {
        return Ok(Box::new(NextAbove));
    }
    if let Some(c) = spec.strip_prefix("const:") {
        return Ok(Box::new(ConstReply(c.parse().map_err(|e| arg(spec, e))?)));
    }
    Err(SpecError::Unknown(spec.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Payoff;

    fn cfg(kind: MoveKind) -> GameConfig {
        GameConfig::new(Mover::Fr, kind, Payoff::Fplus, FilterSpec::FrTensorFr)
    }

    #[test]
    fn round_trips_through_describe() {
        let c = cfg(MoveKind::Element);
        for s in ["partition:b=k^2", "chain:subtract", "chain", "random:seed=7", "tail:5", "above:2"] {
            assert_eq!(parse_strategy_i(s, &c).unwrap().describe(), s);
        }
        for s in ["sigma:family=columns", "least", "random:seed=3", "script:1|4|9"] {
            assert_eq!(parse_strategy_ii(s, &c).unwrap().describe(), s);
        }
        let b = cfg(MoveKind::FiniteBlock);
        assert_eq!(parse_strategy_ii("interval:pi=2^k", &b).unwrap().describe(), "interval:pi=2^k");
    }

    #[test]
    fn rejects_garbage() {
        let c = cfg(MoveKind::Element);
        assert!(matches!(parse_strategy_i("bogus", &c), Err(SpecError::Unknown(_))));
        assert!(parse_strategy_ii("script:1,2", &c).is_err());
        assert!(parse_strategy_ii("sigma:universal=2^k", &c).is_err());
        assert!(parse_g1_strategy_i("linear:3+2").is_err());
        assert!(parse_g1_strategy_ii("below").is_err());
    }

    #[test]
    fn g1_specs_round_trip() {
        for s in ["above:2", "linear:3+2k"] {
            assert_eq!(parse_g1_strategy_i(s).unwrap().describe(), s);
        }
        for s in ["above", "const:5"] {
            assert_eq!(parse_g1_strategy_ii(s).unwrap().describe(), s);
        }
    }
}
