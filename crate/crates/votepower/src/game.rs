//! Weighted voting games over at most 64 parties, coalition predicates, and
//! exhaustive enumeration of winning and minimal winning coalitions.
//!
//! A game `[q; w_1, ..., w_n]` declares a coalition winning when its total
//! weight meets or exceeds the quota `q`. Everything downstream (power
//! indices, graph-restricted values, golden scenario checks) reads games
//! through this module.

use num::BigUint;
use thiserror::Error;

/// Hard bound imposed by the single-word coalition bitmask.
pub const MAX_PARTIES: usize = 64;

/// Default cap for operations that walk the full coalition lattice.
/// Raise it explicitly through the `*_with_cap` variants if you mean it.
pub const DEFAULT_ENUM_CAP: usize = 30;

/// Bit budget for the subset-sum reachability pass in [`WeightedVotingGame::is_null`]
/// (one bit per tracked weight below the quota).
const SUBSET_SUM_BIT_BUDGET: u64 = 1 << 27;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("a game needs at least one party")]
    NoParties,
    #[error("{n} parties exceeds the {max}-party bound", max = MAX_PARTIES)]
    TooManyParties { n: usize },
    #[error("party name {name:?} appears more than once")]
    DuplicateName { name: String },
    #[error("quota must be positive")]
    ZeroQuota,
    #[error("quota {quota} exceeds the total weight {total}")]
    QuotaAboveTotal { quota: u64, total: u64 },
    #[error("total weight overflows a 64-bit integer")]
    WeightOverflow,
    #[error("party index {party} out of range for {n} parties")]
    NoSuchParty { party: usize, n: usize },
    #[error("party {party} is already a member of the coalition")]
    MemberOfCoalition { party: usize },
    #[error("exhaustive enumeration over {n} parties exceeds the cap of {cap}")]
    EnumerationTooLarge { n: usize, cap: usize },
}

/// One voter. `id` is the dense index assigned by the owning game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub id: usize,
    pub name: String,
    pub weight: u64,
}

/// A subset of party indices packed into a bitmask. Bit `i` set means party
/// `i` is a member; bits at or above the owning game's `n` must stay clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_mask(mask: u64) -> Self {
        Coalition(mask)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut mask = 0u64;
        for i in members {
            assert!(i < MAX_PARTIES, "party index {i} out of bitmask range");
            mask |= 1 << i;
        }
        Coalition(mask)
    }

    /// The grand coalition over `n` parties.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_PARTIES);
        if n == MAX_PARTIES {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_PARTIES && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        assert!(i < MAX_PARTIES);
        Coalition(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        assert!(i < MAX_PARTIES);
        Coalition(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Member indices in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Precomputed coalition facts: `|W|`, the minimal winning list, and the
/// per-party swing counts eta_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionCatalog {
    pub winning_count: BigUint,
    pub minimal_winning: Vec<Coalition>,
    pub swings_per_party: Vec<BigUint>,
}

/// `G = [q; w_1, ..., w_n]`. Invariants: at least one party, n <= 64,
/// unique names, 0 < q <= sum of weights (so the grand coalition wins and
/// the empty coalition loses).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedVotingGame {
    parties: Vec<Party>,
    quota: u64,
    total_weight: u64,
}

impl WeightedVotingGame {
    pub fn new(
        quota: u64,
        parties: impl IntoIterator<Item = (String, u64)>,
    ) -> Result<Self, GameError> {
        let parties: Vec<Party> = parties
            .into_iter()
            .enumerate()
            .map(|(id, (name, weight))| Party { id, name, weight })
            .collect();
        if parties.is_empty() {
            return Err(GameError::NoParties);
        }
        if parties.len() > MAX_PARTIES {
            return Err(GameError::TooManyParties { n: parties.len() });
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &parties {
            if !seen.insert(p.name.as_str()) {
                return Err(GameError::DuplicateName {
                    name: p.name.clone(),
                });
            }
        }
        let mut total: u64 = 0;
        for p in &parties {
            total = total
                .checked_add(p.weight)
                .ok_or(GameError::WeightOverflow)?;
        }
        if quota == 0 {
            return Err(GameError::ZeroQuota);
        }
        if quota > total {
            return Err(GameError::QuotaAboveTotal { quota, total });
        }
        Ok(WeightedVotingGame {
            parties,
            quota,
            total_weight: total,
        })
    }

    /// Convenience constructor with generated names P1..Pn.
    pub fn from_weights(quota: u64, weights: &[u64]) -> Result<Self, GameError> {
        Self::new(
            quota,
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (format!("P{}", i + 1), w)),
        )
    }

    /// The same parties under a different quota.
    pub fn with_quota(&self, quota: u64) -> Result<Self, GameError> {
        Self::new(
            quota,
            self.parties.iter().map(|p| (p.name.clone(), p.weight)),
        )
    }

    pub fn n(&self) -> usize {
        self.parties.len()
    }

    pub fn quota(&self) -> u64 {
        self.quota
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn party(&self, i: usize) -> &Party {
        &self.parties[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.parties.iter().position(|p| p.name == name)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.n())
    }

    /// Weighted majority condition: 2q > sum of weights. Guarantees that no
    /// two disjoint coalitions can both win.
    pub fn is_majority(&self) -> bool {
        2 * self.quota as u128 > self.total_weight as u128
    }

    fn check_coalition(&self, s: Coalition) {
        assert!(
            s.is_subset_of(self.grand_coalition()),
            "coalition has members beyond party {}",
            self.n() - 1
        );
    }

    pub fn weight_of(&self, s: Coalition) -> u64 {
        self.check_coalition(s);
        s.members().map(|i| self.parties[i].weight).sum()
    }

    /// The characteristic function: 1 iff the coalition weight meets the quota.
    pub fn characteristic(&self, s: Coalition) -> u8 {
        u8::from(self.is_winning(s))
    }

    pub fn is_winning(&self, s: Coalition) -> bool {
        self.weight_of(s) >= self.quota
    }

    /// A blocking coalition loses but its complement loses too.
    pub fn is_blocking(&self, s: Coalition) -> bool {
        self.check_coalition(s);
        let complement = Coalition::from_mask(self.grand_coalition().mask() & !s.mask());
        !self.is_winning(s) && !self.is_winning(complement)
    }

    /// Whether party `i` turns the losing coalition `s` winning by joining.
    pub fn is_crucial(&self, i: usize, s: Coalition) -> Result<bool, GameError> {
        if i >= self.n() {
            return Err(GameError::NoSuchParty {
                party: i,
                n: self.n(),
            });
        }
        if s.contains(i) {
            return Err(GameError::MemberOfCoalition { party: i });
        }
        let w = self.weight_of(s);
        Ok(w < self.quota && w + self.parties[i].weight >= self.quota)
    }

    /// True iff party `i` has no swing at all (eta_i = 0).
    ///
    /// Decided by subset-sum reachability over the other parties' weights:
    /// a swing for `i` exists iff some subset of the others sums into the
    /// window `[q - w_i, q - 1]`. No enumeration cap applies while the quota
    /// stays within the bitset budget.
    pub fn is_null(&self, i: usize) -> Result<bool, GameError> {
        if i >= self.n() {
            return Err(GameError::NoSuchParty {
                party: i,
                n: self.n(),
            });
        }
        let wi = self.parties[i].weight;
        if wi == 0 {
            return Ok(true);
        }
        if self.quota <= SUBSET_SUM_BIT_BUDGET {
            return Ok(!self.swing_reachable_bitset(i, wi));
        }
        // Quota too large for the bitset: fall back to capped enumeration.
        let others: Vec<u64> = self
            .parties
            .iter()
            .filter(|p| p.id != i)
            .map(|p| p.weight)
            .collect();
        let m = others.len();
        if m > DEFAULT_ENUM_CAP {
            return Err(GameError::EnumerationTooLarge {
                n: self.n(),
                cap: DEFAULT_ENUM_CAP,
            });
        }
        let lo = self.quota - wi.min(self.quota);
        for mask in 0u64..(1u64 << m) {
            let mut w: u64 = 0;
            let mut rest = mask;
            while rest != 0 {
                w += others[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            if w >= lo && w < self.quota {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn swing_reachable_bitset(&self, i: usize, wi: u64) -> bool {
        let q = self.quota as usize;
        let lo = self.quota.saturating_sub(wi) as usize;
        // bits[k] set <=> some subset of the other parties sums to k; sums at
        // or above q are dropped, they can never land in the window.
        let words = q / 64 + 1;
        let mut bits = vec![0u64; words];
        bits[0] = 1;
        for p in &self.parties {
            if p.id == i || p.weight == 0 || p.weight >= self.quota {
                continue;
            }
            let sh = p.weight as usize;
            let word_sh = sh / 64;
            let bit_sh = sh % 64;
            for w in (word_sh..words).rev() {
                let mut v = bits[w - word_sh] << bit_sh;
                if bit_sh > 0 && w > word_sh {
                    v |= bits[w - word_sh - 1] >> (64 - bit_sh);
                }
                bits[w] |= v;
            }
        }
        // Any reachable sum in [lo, q)?
        (lo..q).any(|k| bits[k / 64] >> (k % 64) & 1 == 1)
    }

    pub fn enumerate_minimal_winning(&self) -> Result<Vec<Coalition>, GameError> {
        self.enumerate_minimal_winning_with_cap(DEFAULT_ENUM_CAP)
    }

    /// Every winning coalition all of whose members are crucial, sorted by
    /// (size, bitmask).
    ///
    /// The search walks index-ordered subsets and only descends through
    /// losing prefixes: every proper subset of a minimal winning coalition
    /// loses, so each one is reached exactly once, at the step where its
    /// largest member crosses the quota.
    pub fn enumerate_minimal_winning_with_cap(
        &self,
        cap: usize,
    ) -> Result<Vec<Coalition>, GameError> {
        let n = self.n();
        if n > cap {
            return Err(GameError::EnumerationTooLarge { n, cap });
        }
        let weights: Vec<u64> = self.parties.iter().map(|p| p.weight).collect();
        // suffix[j] = total weight still available from index j on; branches
        // that cannot reach the quota even with all of it are cut.
        let mut suffix = vec![0u64; weights.len() + 1];
        for j in (0..weights.len()).rev() {
            suffix[j] = suffix[j + 1] + weights[j];
        }
        let mut out = Vec::new();
        fn descend(
            weights: &[u64],
            suffix: &[u64],
            quota: u64,
            start: usize,
            mask: u64,
            wsum: u64,
            out: &mut Vec<Coalition>,
        ) {
            for j in start..weights.len() {
                if wsum.saturating_add(suffix[j]) < quota {
                    break;
                }
                let nw = wsum + weights[j];
                if nw >= quota {
                    let cand = Coalition::from_mask(mask | 1 << j);
                    if cand.members().all(|m| nw - weights[m] < quota) {
                        out.push(cand);
                    }
                } else {
                    descend(weights, suffix, quota, j + 1, mask | 1 << j, nw, out);
                }
            }
        }
        descend(&weights, &suffix, self.quota, 0, 0, 0, &mut out);
        out.sort_by_key(|c| (c.len(), c.mask()));
        Ok(out)
    }

    pub fn catalog(&self) -> Result<CoalitionCatalog, GameError> {
        self.catalog_with_cap(DEFAULT_ENUM_CAP)
    }

    /// Full exhaustive pass over the coalition lattice. The DP engine in
    /// `indices` must agree with this bit for bit; tests hold it to that.
    pub fn catalog_with_cap(&self, cap: usize) -> Result<CoalitionCatalog, GameError> {
        let n = self.n();
        if n > cap {
            return Err(GameError::EnumerationTooLarge { n, cap });
        }
        let minimal_winning = self.enumerate_minimal_winning_with_cap(cap)?;
        let weights: Vec<u64> = self.parties.iter().map(|p| p.weight).collect();
        let mut winning: u128 = 0;
        let mut swings = vec![0u128; n];
        for mask in 0u128..(1u128 << n) {
            let m = mask as u64;
            let coalition = Coalition::from_mask(m);
            let w: u64 = coalition.members().map(|i| weights[i]).sum();
            if w >= self.quota {
                winning += 1;
            } else {
                for (i, &wi) in weights.iter().enumerate() {
                    if m >> i & 1 == 0 && w + wi >= self.quota {
                        swings[i] += 1;
                    }
                }
            }
        }
        Ok(CoalitionCatalog {
            winning_count: BigUint::from(winning),
            minimal_winning,
            swings_per_party: swings.into_iter().map(BigUint::from).collect(),
        })
    }
}
