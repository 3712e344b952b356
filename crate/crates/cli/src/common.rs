use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use filter_games::games::{
    certify_outcome, ConfigError, EngineError, GameConfig, Header, MoveKind, Transcript, TranscriptError, Variant,
    Verdict, VerdictTag,
};
use filter_games::strategies::SpecError;
use filter_games::transforms::TransformError;
use filter_games::trees::{TreeBuildError, TreeError};
use filter_games::witnesses::{Ladder, Partition, RuleError, SetFamily, WitnessError};
use filter_games::{FilterError, FilterSpec, SetError};
use serde::Serialize;
use thiserror::Error;

use crate::args::{GameArgs, VariantArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    TreeBuild(#[from] TreeBuildError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
    #[error(transparent)]
    Certify(#[from] filter_games::games::CertifyError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// How a run ended: 0 for success, 1 for a refuted or forfeited outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refuted,
}

impl Status {
    pub fn from_refuted(refuted: bool) -> Status {
        if refuted {
            Status::Refuted
        } else {
            Status::Ok
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
        }
    }
}

/// JSON lines written to stdout and, with `--out`, to a file.
pub struct Output {
    text: String,
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(path: Option<PathBuf>) -> Self {
        Output { text: String::new(), path }
    }

    pub fn line(&mut self, value: &impl Serialize) {
        self.text.push_str(&serde_json::to_string(value).expect("output serializes"));
        self.text.push('\n');
    }

    pub fn transcript(&mut self, t: &Transcript) {
        self.text.push_str(&t.to_jsonl());
    }

    pub fn finish(self, stdout: &mut dyn Write) -> Result<(), CliError> {
        let io = |path: PathBuf| move |source| CliError::Io { path, source };
        stdout.write_all(self.text.as_bytes()).map_err(io("<stdout>".into()))?;
        if let Some(p) = self.path {
            fs::write(&p, &self.text).map_err(io(p.clone()))?;
        }
        Ok(())
    }
}

pub fn filter(text: &str) -> Result<FilterSpec, CliError> {
    Ok(text.parse()?)
}

/// The standard game named by `--game`, or the integer game for
/// `--variant=g1`.
pub fn game_config(g: &GameArgs, default_game: &str) -> Result<GameConfig, CliError> {
    let f = filter(&g.filter)?;
    if g.rounds == 0 {
        return Err(usage("--rounds must be at least 1"));
    }
    match g.variant {
        VariantArg::Standard => Ok(GameConfig::parse_game(g.game.as_deref().unwrap_or(default_game), f)?),
        VariantArg::G1 => {
            let c = GameConfig::g1(f);
            match &g.game {
                Some(text) if GameConfig::parse_game(text, c.filter.clone())?.game_text() != c.game_text() => {
                    Err(ConfigError::G1Shape.into())
                }
                _ => Ok(c),
            }
        }
    }
}

fn strategy_arg<'a>(spec: &'a str, head: &str) -> Option<&'a str> {
    spec.strip_prefix(head)
}

/// Resolves a certifier name against the strategies in a header. `auto`
/// picks the certifier matching the strategies and move kind, falling
/// back to `forfeit`.
pub fn certifier(name: &str, h: &Header) -> Result<filter_games::games::Certifier, CliError> {
    use filter_games::games::Certifier as C;
    let (si, sii) = (h.strategy_i.as_str(), h.strategy_ii.as_str());
    let elem = h.config.move_kind == MoveKind::Element;
    let partition = || -> Result<Option<C>, CliError> {
        Ok(match strategy_arg(si, "partition:b=") {
            Some(r) => Some(C::PartitionSelector { partition: Partition::new(r.parse()?)?, witness_asserted: false }),
            None => None,
        })
    };
    let interval = || -> Result<Option<C>, CliError> {
        Ok(match strategy_arg(sii, "interval:pi=") {
            Some(r) => Some(C::Interval { ladder: Ladder::new(r.parse()?)? }),
            None => None,
        })
    };
    let fixed = || -> Result<Option<C>, CliError> {
        Ok(match strategy_arg(sii, "fixed:") {
            Some(x) => Some(C::FixedSet { x: x.parse()? }),
            None => None,
        })
    };
    let sigma = || -> Result<Option<C>, CliError> {
        Ok(match strategy_arg(sii, "sigma:family=") {
            Some(f) => Some(C::SigmaDiag { family: f.parse::<SetFamily>()? }),
            None => None,
        })
    };
    let chain = || (si == "chain:subtract").then_some(C::ChainSubtract);
    let need = |c: Option<C>, what: &str| c.ok_or_else(|| usage(format!("certifier {name} needs {what}")));
    Ok(match name {
        "forfeit" => C::Forfeit,
        "partition-selector" => need(partition()?, "I = partition:b=<rule>")?,
        "interval" => need(interval()?, "II = interval:pi=<rule>")?,
        "fixed-set" => need(fixed()?, "II = fixed:<set>")?,
        "sigma-diag" => need(sigma()?, "II = sigma:family=<family>")?,
        "chain-subtract" => need(chain(), "I = chain:subtract")?,
        "auto" => {
            let element_only = [sigma()?, partition()?, chain()].into_iter().flatten().next().filter(|_| elem);
            let block_only = interval()?.filter(|_| !elem);
            element_only.or(block_only).or(fixed()?).unwrap_or(C::Forfeit)
        }
        other => return Err(usage(format!("unknown certifier `{other}`"))),
    })
}

/// Certifies a standard transcript. The summary names the certifier
/// used; the status is refuted exactly when a player forfeited.
pub fn certify(t: &Transcript, name: &str) -> Result<(serde_json::Value, Status), CliError> {
    if t.header.config.variant != Variant::Standard {
        return Err(usage("certifiers apply to the standard variant"));
    }
    let c = certifier(name, &t.header)?;
    let v: Verdict = certify_outcome(t, &c)?;
    let forfeit = v.certificate.as_ref().is_some_and(|c| c.name == "forfeit");
    Ok((serde_json::json!({"verdict": v, "certifier": c.name()}), Status::from_refuted(forfeit)))
}

/// Summary of an integer-game play: forfeits and a broken increase are
/// losses for the offender.
pub fn g1_verdict(t: &Transcript) -> (serde_json::Value, Status) {
    let flags = t.g1_flags();
    let tag = match (t.forfeited_by(), flags.increase_broken_at) {
        (Some(filter_games::games::Player::I), _) => VerdictTag::WinII,
        (Some(_), _) | (None, Some(_)) => VerdictTag::WinI,
        (None, None) => VerdictTag::Undetermined(t.rounds_played()),
    };
    let refuted = t.forfeited_by().is_some() || flags.increase_broken_at.is_some();
    (serde_json::json!({"verdict": {"tag": tag}, "g1": flags}), Status::from_refuted(refuted))
}
