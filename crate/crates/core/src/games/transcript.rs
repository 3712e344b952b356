use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GameConfig, History, IIMove};
use crate::setkit::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

/// A recorded move: an integer, an integer list, or a set descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MoveValue {
    Int(u64),
    List(Vec<u64>),
    Set(Subset),
}

impl From<&IIMove> for MoveValue {
    fn from(m: &IIMove) -> Self {
        match m {
            IIMove::Element(n) => MoveValue::Int(*n),
            IIMove::Block(s) => MoveValue::List(s.iter().copied().collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub k: usize,
    pub player: Player,
    #[serde(rename = "move")]
    pub value: Option<MoveValue>,
    pub legal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub config: GameConfig,
    pub seed: u64,
    pub rounds: usize,
    #[serde(rename = "I")]
    pub strategy_i: String,
    #[serde(rename = "II")]
    pub strategy_ii: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub header: Header,
    pub records: Vec<MoveRecord>,
}

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error("empty transcript file")]
    MissingHeader,
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
}

impl Transcript {
    pub fn new(header: Header) -> Self {
        Transcript { header, records: Vec::new() }
    }

    pub fn push(&mut self, player: Player, value: Option<MoveValue>, legal: bool, reason: Option<String>) {
        let k = self.records.iter().filter(|r| r.player == player).count();
        self.records.push(MoveRecord { k, player, value, legal, reason });
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TranscriptError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (i, first) = lines.next().ok_or(TranscriptError::MissingHeader)?;
        let header = serde_json::from_str(first)
            .map_err(|source| TranscriptError::Json { line: i + 1, source })?;
        let records = lines
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|source| TranscriptError::Json { line: i + 1, source })
            })
            .collect::<Result<_, _>>()?;
        Ok(Transcript { header, records })
    }

    pub fn is_legal(&self) -> bool {
        self.records.iter().all(|r| r.legal)
    }

    pub fn first_violation(&self) -> Option<&MoveRecord> {
        self.records.iter().find(|r| !r.legal)
    }

    /// The player who broke the rules first, and so loses.
    pub fn forfeited_by(&self) -> Option<Player> {
        self.first_violation().map(|r| r.player)
    }

    /// I's legal set moves, in order.
    pub fn i_sets(&self) -> Vec<Subset> {
        self.records
            .iter()
            .filter(|r| r.player == Player::I && r.legal)
            .filter_map(|r| match &r.value {
                Some(MoveValue::Set(s)) => Some(s.clone()),
                _ => None,
            })
            .collect()
    }

    /// Integer moves by a player, for the 𝔊₁ variant and element games.
    pub fn ints(&self, player: Player) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| r.player == player && r.legal)
            .filter_map(|r| match &r.value {
                Some(MoveValue::Int(n)) => Some(*n),
                _ => None,
            })
            .collect()
    }

    /// II's legal replies.
    pub fn ii_moves(&self) -> Vec<IIMove> {
        self.records
            .iter()
            .filter(|r| r.player == Player::II && r.legal)
            .filter_map(|r| match &r.value {
                Some(MoveValue::Int(n)) => Some(IIMove::Element(*n)),
                Some(MoveValue::List(v)) => Some(IIMove::block(v.iter().copied())),
                _ => None,
            })
            .collect()
    }

    /// Union of II's legal replies.
    pub fn outcome(&self) -> BTreeSet<u64> {
        self.ii_moves().iter().flat_map(IIMove::elements).collect()
    }

    /// Completed rounds.
    pub fn rounds_played(&self) -> usize {
        self.ii_moves().len()
    }

    /// History of the completed rounds.
    pub fn history(&self) -> History {
        let n = self.rounds_played();
        let mut i_moves = self.i_sets();
        i_moves.truncate(n);
        History { seed: self.header.seed, i_moves, ii_moves: self.ii_moves() }
    }
}
