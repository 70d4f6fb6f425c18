//! The on-disk game format: a TOML document with a `quota`, an ordered
//! `[[parties]]` list, optional `edges` (pairs of party names), and optional
//! `[[votes]]` entries carrying either raw `count`s or `permille` shares.
//! Unknown keys are rejected. The bracket literal `[q; w1, ..., wn]` is a
//! second, inline way to state a bare game.

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apportion::{ApportionError, ElectionResult, SeatAllocation};
use crate::game::{GameError, WeightedVotingGame};
use crate::myerson::{CommunicationGraph, MyersonError};
use crate::report::parse_decimal;

#[derive(Debug, Error)]
pub enum GameFileError {
    #[error("invalid game file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] MyersonError),
    #[error(transparent)]
    Election(#[from] ApportionError),
    #[error("edge references unknown party {name:?}")]
    UnknownEdgeParty { name: String },
    #[error("vote entry references unknown party {name:?}")]
    UnknownVoteParty { name: String },
    #[error("vote entry for {name:?} needs exactly one of `count` and `permille`")]
    VoteKind { name: String },
    #[error("vote entries mix `count` and `permille`; use one kind throughout")]
    MixedVoteKinds,
    #[error("vote share for {name:?} is not a usable per-mille value: {reason}")]
    BadPermille { name: String, reason: String },
    #[error("invalid game literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },
}

/// Serde shape of a game file. Field order matters for serialization: TOML
/// requires plain values (`quota`, `edges`) before arrays of tables.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawGameFile {
    pub quota: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(String, String)>>,
    pub parties: Vec<RawParty>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub votes: Option<Vec<RawVote>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawParty {
    pub name: String,
    pub weight: u64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawVote {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permille: Option<toml::Value>,
}

/// A parsed and validated game file.
#[derive(Debug, Clone)]
pub struct GameFileContents {
    pub game: WeightedVotingGame,
    pub graph: Option<CommunicationGraph>,
    pub election: Option<ElectionResult>,
}

impl RawGameFile {
    pub fn build(&self) -> Result<GameFileContents, GameFileError> {
        let game = WeightedVotingGame::new(
            self.quota,
            self.parties.iter().map(|p| (p.name.clone(), p.weight)),
        )?;

        let graph = match &self.edges {
            None => None,
            Some(pairs) => {
                let mut edges = Vec::with_capacity(pairs.len());
                for (a, b) in pairs {
                    let ia = game
                        .index_of(a)
                        .ok_or_else(|| GameFileError::UnknownEdgeParty { name: a.clone() })?;
                    let ib = game
                        .index_of(b)
                        .ok_or_else(|| GameFileError::UnknownEdgeParty { name: b.clone() })?;
                    edges.push((ia, ib));
                }
                Some(CommunicationGraph::new(game.n(), edges)?)
            }
        };

        let election = match &self.votes {
            None => None,
            Some(votes) => Some(build_election(&game, votes)?),
        };

        Ok(GameFileContents {
            game,
            graph,
            election,
        })
    }
}

fn build_election(
    game: &WeightedVotingGame,
    votes: &[RawVote],
) -> Result<ElectionResult, GameFileError> {
    let mut counts: Vec<(String, u64)> = Vec::new();
    let mut shares: Vec<(String, BigRational)> = Vec::new();
    for vote in votes {
        if game.index_of(&vote.name).is_none() {
            return Err(GameFileError::UnknownVoteParty {
                name: vote.name.clone(),
            });
        }
        match (vote.count, &vote.permille) {
            (Some(c), None) => counts.push((vote.name.clone(), c)),
            (None, Some(p)) => shares.push((vote.name.clone(), permille_to_share(&vote.name, p)?)),
            _ => {
                return Err(GameFileError::VoteKind {
                    name: vote.name.clone(),
                })
            }
        }
    }
    if !counts.is_empty() && !shares.is_empty() {
        return Err(GameFileError::MixedVoteKinds);
    }
    let election = if shares.is_empty() {
        ElectionResult::from_counts(counts)?
    } else {
        ElectionResult::from_shares(shares)?
    };
    Ok(election)
}

/// Per-mille values accept TOML integers, floats, and decimal strings.
/// Floats go through their shortest round-trip decimal rendering, so a file
/// saying `permille = 188.5` means exactly 1885/10000.
fn permille_to_share(name: &str, value: &toml::Value) -> Result<BigRational, GameFileError> {
    let bad = |reason: &str| GameFileError::BadPermille {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let permille = match value {
        toml::Value::Integer(i) => BigRational::from_integer((*i).into()),
        toml::Value::Float(f) => {
            if !f.is_finite() {
                return Err(bad("not a finite number"));
            }
            parse_decimal(&format!("{f}")).ok_or_else(|| bad("not a decimal number"))?
        }
        toml::Value::String(s) => parse_decimal(s).ok_or_else(|| bad("not a decimal number"))?,
        _ => return Err(bad("expected a number or a decimal string")),
    };
    Ok(permille / BigRational::from_integer(1000.into()))
}

pub fn parse_game_file(text: &str) -> Result<GameFileContents, GameFileError> {
    let raw: RawGameFile = toml::from_str(text)?;
    raw.build()
}

/// Parses the bracket notation `[q; w1, w2, ..., wn]`. Parties are named
/// P1 through Pn in listed order.
pub fn parse_game_literal(literal: &str) -> Result<WeightedVotingGame, GameFileError> {
    let bad = |reason: &str| GameFileError::BadLiteral {
        literal: literal.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = literal.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected the form [q; w1, w2, ...]"))?;
    let (quota_part, weights_part) = inner
        .split_once(';')
        .ok_or_else(|| bad("expected a ';' between the quota and the weights"))?;
    let quota: u64 = quota_part
        .trim()
        .parse()
        .map_err(|_| bad("quota is not a non-negative integer"))?;
    let mut weights = Vec::new();
    for piece in weights_part.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(bad("empty weight entry"));
        }
        let w: u64 = piece
            .parse()
            .map_err(|_| bad("weight is not a non-negative integer"))?;
        weights.push(w);
    }
    Ok(WeightedVotingGame::from_weights(quota, &weights)?)
}

/// The parliament a seat allocation induces: seated parties with their seat
/// totals as weights, at the given quota. Vote and edge data do not carry
/// over.
pub fn induced_game_file(allocation: &SeatAllocation, quota: u64) -> RawGameFile {
    RawGameFile {
        quota,
        edges: None,
        parties: allocation
            .entries
            .iter()
            .filter(|e| e.total > 0)
            .map(|e| RawParty {
                name: e.name.clone(),
                weight: e.total,
            })
            .collect(),
        votes: None,
    }
}

pub fn render_game_file(raw: &RawGameFile) -> String {
    toml::to_string(raw).expect("game files serialize to TOML")
}
