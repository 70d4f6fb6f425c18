//! Weighted voting games and the power indices built on them.
//!
//! A chamber is modeled as `[q; w_1, ..., w_n]`: a motion passes exactly when
//! the supporting coalition's total weight reaches the quota `q`. On top of
//! that model the crate computes the classic indices (Shapley-Shubik, Banzhaf
//! absolute and normalized, Holler/PGI, Deegan-Packel, Coleman initiate and
//! prevent) in exact rational arithmetic, evaluates the Myerson index under a
//! communication graph, and implements the Greek reinforced-proportional seat
//! apportionment: a 3% threshold, 250 seats by largest remainder, and a
//! 50-seat bonus to the plurality winner.
//!
//! ```
//! use votepower::game::WeightedVotingGame;
//! use votepower::indices::shapley_shubik;
//!
//! let game = WeightedVotingGame::from_weights(3, &[2, 1, 1]).unwrap();
//! let ssi = shapley_shubik(&game).unwrap();
//! assert_eq!(ssi.rendered(2), vec!["0.67", "0.17", "0.17"]);
//! assert_eq!(ssi.ranking, vec![vec![0], vec![1, 2]]);
//! ```
//!
//! Three parliaments ship as named scenarios (`may2012`, `june2012`,
//! `dec2014`) together with the published index rows they are checked
//! against; see [`scenario`]. The `votepower` binary exposes all of this on
//! the command line.

pub mod apportion;
pub mod cli;
pub mod game;
pub mod gamefile;
pub mod indices;
pub mod myerson;
pub mod report;
pub mod scenario;

pub use game::{Coalition, GameError, Party, WeightedVotingGame};
pub use indices::{Engine, IndexKind, IndexReport};
pub use myerson::CommunicationGraph;
