//! Communication structures between parties and the Myerson index: the
//! Shapley value of the graph-restricted game v_E, which credits a coalition
//! with the sum of v over the connected components of its induced subgraph.
//!
//! The base game must be a weighted majority game (2q > total weight), so at
//! most one component can win and v_E stays binary.

use std::collections::BTreeSet;

use num::{BigRational, BigUint};
use thiserror::Error;

use crate::game::{Coalition, GameError, WeightedVotingGame, MAX_PARTIES};
use crate::indices::{shapley_from_counts, IndexKind, IndexReport};

/// Exhaustive Shapley over v_E walks all 2^n coalitions; there is no
/// weighted-DP shortcut because v_E is not a weighted game.
pub const MYERSON_CAP: usize = 25;

#[derive(Debug, Error)]
pub enum MyersonError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{n} parties exceeds the {max}-party bound", max = MAX_PARTIES)]
    TooManyParties { n: usize },
    #[error("edge ({a}, {b}) out of range for {n} parties")]
    EdgeOutOfRange { a: usize, b: usize, n: usize },
    #[error("graph covers {graph_n} parties but the game has {game_n}")]
    SizeMismatch { graph_n: usize, game_n: usize },
    #[error("the base game is not a weighted majority game (2q <= total weight), so the restricted value could double-count winning components")]
    NonMajorityBase,
    #[error("Myerson index over {n} parties exceeds the {cap}-party cap")]
    CapExceeded { n: usize, cap: usize },
}

/// Undirected links between parties. Symmetric by construction; self-loops
/// are dropped (diagonal marks in connectivity tables are identity markers,
/// not edges); duplicate edges are idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunicationGraph {
    n: usize,
    adjacency: Vec<u64>,
    edges: BTreeSet<(usize, usize)>,
}

impl CommunicationGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MyersonError> {
        if n > MAX_PARTIES {
            return Err(MyersonError::TooManyParties { n });
        }
        let mut set = BTreeSet::new();
        let mut adjacency = vec![0u64; n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(MyersonError::EdgeOutOfRange { a, b, n });
            }
            if a == b {
                continue;
            }
            set.insert((a.min(b), a.max(b)));
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        Ok(CommunicationGraph {
            n,
            adjacency,
            edges: set,
        })
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::new(n, pairs).expect("complete graph within bounds")
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("empty graph within bounds")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (low, high) pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adjacency[a] >> b & 1 == 1
    }

    pub fn neighbors(&self, i: usize) -> Coalition {
        Coalition::from_mask(self.adjacency[i])
    }

    /// Maximal connected subsets of `s` under the induced subgraph, ordered
    /// by their lowest member. Singletons are their own components.
    pub fn components(&self, s: Coalition) -> Vec<Coalition> {
        assert!(
            s.is_subset_of(Coalition::full(self.n)),
            "coalition has members beyond party {}",
            self.n.saturating_sub(1)
        );
        let mask = s.mask();
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let mut reach = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let i = f.trailing_zeros() as usize;
                    f &= f - 1;
                    reach |= self.adjacency[i];
                }
                frontier = reach & mask & !comp;
                comp |= frontier;
            }
            out.push(Coalition::from_mask(comp));
            rest &= !comp;
        }
        out
    }
}

/// The E-restricted game with every v_E value precomputed up front, so reads
/// need no locking and are safe to share across threads.
#[derive(Debug, Clone)]
pub struct RestrictedGame {
    base: WeightedVotingGame,
    graph: CommunicationGraph,
    table: Vec<u8>,
}

impl RestrictedGame {
    pub fn new(
        base: &WeightedVotingGame,
        graph: &CommunicationGraph,
    ) -> Result<Self, MyersonError> {
        let n = base.n();
        if graph.n() != n {
            return Err(MyersonError::SizeMismatch {
                graph_n: graph.n(),
                game_n: n,
            });
        }
        if n > MYERSON_CAP {
            return Err(MyersonError::CapExceeded {
                n,
                cap: MYERSON_CAP,
            });
        }
        if !base.is_majority() {
            return Err(MyersonError::NonMajorityBase);
        }
        let weights: Vec<u64> = base.parties().iter().map(|p| p.weight).collect();
        let quota = base.quota();
        let mut table = vec![0u8; 1usize << n];
        for mask in 1u64..(1u64 << n) {
            let total: u64 = Coalition::from_mask(mask)
                .members()
                .map(|i| weights[i])
                .sum();
            if total < quota {
                continue;
            }
            let winning_component = graph
                .components(Coalition::from_mask(mask))
                .into_iter()
                .any(|c| c.members().map(|i| weights[i]).sum::<u64>() >= quota);
            table[mask as usize] = u8::from(winning_component);
        }
        Ok(RestrictedGame {
            base: base.clone(),
            graph: graph.clone(),
            table,
        })
    }

    pub fn base(&self) -> &WeightedVotingGame {
        &self.base
    }

    pub fn graph(&self) -> &CommunicationGraph {
        &self.graph
    }

    /// v_E(s): 1 iff some connected component of `s` wins the base game.
    pub fn restricted_value(&self, s: Coalition) -> u8 {
        assert!(
            s.is_subset_of(self.base.grand_coalition()),
            "coalition has members beyond party {}",
            self.base.n() - 1
        );
        self.table[s.mask() as usize]
    }
}

/// mu_i = phi_i(v_E): the Shapley value of the restricted game, computed by
/// subset enumeration over the precomputed v_E table.
pub fn myerson_index(
    game: &WeightedVotingGame,
    graph: &CommunicationGraph,
) -> Result<IndexReport, MyersonError> {
    let restricted = RestrictedGame::new(game, graph)?;
    Ok(myerson_from_restricted(&restricted))
}

pub fn myerson_from_restricted(restricted: &RestrictedGame) -> IndexReport {
    let n = restricted.base.n();
    let table = &restricted.table;
    let mut counts = vec![vec![0u64; n]; n];
    for mask in 0u64..(1u64 << n) {
        let v = table[mask as usize];
        let s = mask.count_ones() as usize;
        for (i, row) in counts.iter_mut().enumerate() {
            if mask >> i & 1 == 0 && table[(mask | 1 << i) as usize] > v {
                row[s] += 1;
            }
        }
    }
    let big: Vec<Vec<BigUint>> = counts
        .into_iter()
        .map(|row| row.into_iter().map(BigUint::from).collect())
        .collect();
    IndexReport::new(IndexKind::Myerson, shapley_from_counts(n, &big))
}

/// Sum of the Myerson values: equals v_E(N) (1 when some component of the
/// full graph wins, else 0).
pub fn myerson_total(report: &IndexReport) -> BigRational {
    report
        .values
        .iter()
        .fold(BigRational::from_integer(0.into()), |a, b| a + b)
}
