//! Bundled parliaments: the May 2012 and June 2012 Greek chambers with the
//! party-adjacency graph and national vote shares, and the December 2014
//! presidential vote held by the June chamber at a 180-vote supermajority.
//! Each scenario carries the published index rows it is checked against.

use thiserror::Error;

use crate::apportion::ElectionResult;
use crate::game::WeightedVotingGame;
use crate::gamefile::parse_game_file;
use crate::indices::IndexKind;
use crate::myerson::CommunicationGraph;

pub const SCENARIO_NAMES: [&str; 3] = ["may2012", "june2012", "dec2014"];

const MAY2012_TOML: &str = include_str!("../data/may2012.toml");
const JUNE2012_TOML: &str = include_str!("../data/june2012.toml");
const DEC2014_TOML: &str = include_str!("../data/dec2014.toml");

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {name:?}; available: may2012, june2012, dec2014")]
    Unknown { name: String },
}

/// A published index row, rendered at two decimals, in game party order.
#[derive(Debug, Clone, Copy)]
pub struct GoldenTable {
    pub kind: IndexKind,
    pub rendered: &'static [&'static str],
}

const MAY_GOLDENS: &[GoldenTable] = &[
    GoldenTable {
        kind: IndexKind::Ssi,
        rendered: &["0.09", "0.16", "0.06", "0.09", "0.46", "0.09", "0.06"],
    },
    GoldenTable {
        kind: IndexKind::Pgi,
        rendered: &["0.15", "0.10", "0.13", "0.15", "0.21", "0.15", "0.13"],
    },
    GoldenTable {
        kind: IndexKind::Myerson,
        rendered: &["0.05", "0.18", "0.22", "0.18", "0.32", "0.05", "0"],
    },
];

const JUNE_GOLDENS: &[GoldenTable] = &[
    GoldenTable {
        kind: IndexKind::Ssi,
        rendered: &["0.06", "0.12", "0.06", "0.12", "0.52", "0.06", "0.06"],
    },
    GoldenTable {
        kind: IndexKind::Pgi,
        rendered: &["0.14", "0.12", "0.14", "0.12", "0.19", "0.14", "0.14"],
    },
    GoldenTable {
        kind: IndexKind::Myerson,
        rendered: &["0.03", "0.12", "0.12", "0.28", "0.42", "0.03", "0"],
    },
];

const DEC_GOLDENS: &[GoldenTable] = &[
    GoldenTable {
        kind: IndexKind::Ssi,
        rendered: &["0.01", "0.16", "0.03", "0.08", "0.63", "0.05", "0.03"],
    },
    GoldenTable {
        kind: IndexKind::Pgi,
        rendered: &["0.06", "0.06", "0.12", "0.19", "0.31", "0.12", "0.12"],
    },
    GoldenTable {
        kind: IndexKind::ColemanPrevent,
        rendered: &["0.02", "0.36", "0.06", "0.23", "1", "0.11", "0.11"],
    },
    GoldenTable {
        kind: IndexKind::ColemanInitiate,
        rendered: &["0.01", "0.21", "0.04", "0.14", "0.58", "0.06", "0.06"],
    },
];

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub game: WeightedVotingGame,
    pub graph: Option<CommunicationGraph>,
    pub election: Option<ElectionResult>,
    pub goldens: &'static [GoldenTable],
}

impl Scenario {
    pub fn golden_for(&self, kind: IndexKind) -> Option<&'static [&'static str]> {
        self.goldens
            .iter()
            .find(|g| g.kind == kind)
            .map(|g| g.rendered)
    }
}

pub fn load(name: &str) -> Result<Scenario, ScenarioError> {
    let (canon, text, description, goldens): (&str, &str, &str, &[GoldenTable]) = match name {
        "may2012" => (
            "may2012",
            MAY2012_TOML,
            "Greek parliament elected May 2012: seven parties over 300 seats, \
             simple majority of 151, with the party-adjacency graph and national \
             vote shares",
            MAY_GOLDENS,
        ),
        "june2012" => (
            "june2012",
            JUNE2012_TOML,
            "Greek parliament elected June 2012: seven parties over 300 seats, \
             simple majority of 151, with the party-adjacency graph and national \
             vote shares",
            JUNE_GOLDENS,
        ),
        "dec2014" => (
            "dec2014",
            DEC2014_TOML,
            "December 2014 presidential vote in the June 2012 chamber: 300 \
             members, 180-vote supermajority, no adjacency graph or vote shares",
            DEC_GOLDENS,
        ),
        _ => {
            return Err(ScenarioError::Unknown {
                name: name.to_string(),
            })
        }
    };
    let contents = parse_game_file(text).expect("bundled scenario data is valid");
    Ok(Scenario {
        name: canon,
        description,
        game: contents.game,
        graph: contents.graph,
        election: contents.election,
        goldens,
    })
}

pub fn all() -> Vec<Scenario> {
    SCENARIO_NAMES
        .iter()
        .map(|n| load(n).expect("bundled scenario names load"))
        .collect()
}
