//! Reinforced-proportional seat apportionment for a 300-seat chamber: a 3%
//! national threshold, 250 seats split by largest remainder (Hare) over the
//! qualifying parties' renormalized shares, and a 50-seat bonus to the
//! plurality winner.

use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

pub const TOTAL_SEATS: u64 = 300;
pub const PROPORTIONAL_SEATS: u64 = 250;
pub const BONUS_SEATS: u64 = 50;

/// Representation threshold, inclusive: a share of exactly 3% qualifies.
pub fn threshold() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(100))
}

#[derive(Debug, Error)]
pub enum ApportionError {
    #[error("no parties in the election result")]
    NoEntries,
    #[error("party {name:?} appears more than once")]
    DuplicateParty { name: String },
    #[error("party {name:?} has a negative vote share")]
    NegativeShare { name: String },
    #[error("party {name:?} has a vote share above 1")]
    ShareAboveOne { name: String },
    #[error("vote shares sum to {sum}, more than the whole electorate")]
    SharesExceedUnity { sum: String },
    #[error("total vote count is zero")]
    ZeroTotalVotes,
    #[error("no party reaches the 3% threshold")]
    EmptyQualifying,
    #[error("plurality tie between {a:?} and {b:?}: the 50-seat bonus is undefined")]
    PluralityTie { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionEntry {
    pub name: String,
    /// Share of valid votes in [0, 1]. Shares may sum to less than 1; the
    /// gap is sub-threshold scatter and invalid votes.
    pub share: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionResult {
    entries: Vec<ElectionEntry>,
}

impl ElectionResult {
    pub fn from_shares(shares: Vec<(String, BigRational)>) -> Result<Self, ApportionError> {
        if shares.is_empty() {
            return Err(ApportionError::NoEntries);
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut sum = BigRational::zero();
        for (name, share) in &shares {
            if !seen.insert(name.clone()) {
                return Err(ApportionError::DuplicateParty { name: name.clone() });
            }
            if share.is_negative() {
                return Err(ApportionError::NegativeShare { name: name.clone() });
            }
            if *share > BigRational::from_integer(1.into()) {
                return Err(ApportionError::ShareAboveOne { name: name.clone() });
            }
            sum += share;
        }
        if sum > BigRational::from_integer(1.into()) {
            return Err(ApportionError::SharesExceedUnity {
                sum: sum.to_string(),
            });
        }
        Ok(ElectionResult {
            entries: shares
                .into_iter()
                .map(|(name, share)| ElectionEntry { name, share })
                .collect(),
        })
    }

    pub fn from_counts(counts: Vec<(String, u64)>) -> Result<Self, ApportionError> {
        if counts.is_empty() {
            return Err(ApportionError::NoEntries);
        }
        let total: u64 = counts.iter().map(|(_, c)| c).sum();
        if total == 0 {
            return Err(ApportionError::ZeroTotalVotes);
        }
        let denom = BigInt::from(total);
        Self::from_shares(
            counts
                .into_iter()
                .map(|(name, c)| (name, BigRational::new(BigInt::from(c), denom.clone())))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[ElectionEntry] {
        &self.entries
    }

    /// Indices of the parties at or above the 3% threshold, in input order.
    pub fn apply_threshold(&self) -> Result<Vec<usize>, ApportionError> {
        let t = threshold();
        let qualifying: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].share >= t)
            .collect();
        if qualifying.is_empty() {
            return Err(ApportionError::EmptyQualifying);
        }
        Ok(qualifying)
    }

    pub fn allocate(&self) -> Result<SeatAllocation, ApportionError> {
        allocate(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeatEntry {
    pub name: String,
    pub share: BigRational,
    pub qualifying: bool,
    pub proportional: u64,
    pub bonus: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeatAllocation {
    pub entries: Vec<SeatEntry>,
    /// Index into `entries` of the plurality winner.
    pub winner: usize,
}

impl SeatAllocation {
    pub fn seats(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.total).collect()
    }
}

pub fn apply_threshold(result: &ElectionResult) -> Result<Vec<usize>, ApportionError> {
    result.apply_threshold()
}

/// Largest-remainder (Hare) allocation of the 250 proportional seats over the
/// qualifying parties' renormalized shares, then the 50-seat bonus to the
/// unique plurality winner. Remainder ties break toward the larger share,
/// then the earlier entry; a tie for plurality is a hard error.
pub fn allocate(result: &ElectionResult) -> Result<SeatAllocation, ApportionError> {
    let qualifying = result.apply_threshold()?;
    let entries = result.entries();

    let base: BigRational = qualifying
        .iter()
        .fold(BigRational::zero(), |a, &i| a + &entries[i].share);
    let proportional_pool = BigRational::from_integer(BigInt::from(PROPORTIONAL_SEATS));

    let mut floors: Vec<u64> = Vec::with_capacity(qualifying.len());
    let mut remainders: Vec<BigRational> = Vec::with_capacity(qualifying.len());
    for &i in &qualifying {
        let quota = &proportional_pool * &entries[i].share / &base;
        let floor = quota.floor();
        let floor_u64 = u64::try_from(floor.to_integer()).expect("quota fits the pool");
        remainders.push(&quota - floor);
        floors.push(floor_u64);
    }
    let assigned: u64 = floors.iter().sum();
    let leftover = PROPORTIONAL_SEATS - assigned;

    let mut order: Vec<usize> = (0..qualifying.len()).collect();
    order.sort_by(|&a, &b| {
        remainders[b]
            .cmp(&remainders[a])
            .then_with(|| {
                entries[qualifying[b]]
                    .share
                    .cmp(&entries[qualifying[a]].share)
            })
            .then(qualifying[a].cmp(&qualifying[b]))
    });
    for &k in order.iter().take(leftover as usize) {
        floors[k] += 1;
    }

    let mut winner_pos = 0;
    for k in 1..qualifying.len() {
        if entries[qualifying[k]].share > entries[qualifying[winner_pos]].share {
            winner_pos = k;
        }
    }
    for k in 0..qualifying.len() {
        if k != winner_pos && entries[qualifying[k]].share == entries[qualifying[winner_pos]].share
        {
            let (first, second) = if winner_pos < k {
                (winner_pos, k)
            } else {
                (k, winner_pos)
            };
            return Err(ApportionError::PluralityTie {
                a: entries[qualifying[first]].name.clone(),
                b: entries[qualifying[second]].name.clone(),
            });
        }
    }
    let winner = qualifying[winner_pos];

    let mut out: Vec<SeatEntry> = entries
        .iter()
        .map(|e| SeatEntry {
            name: e.name.clone(),
            share: e.share.clone(),
            qualifying: false,
            proportional: 0,
            bonus: 0,
            total: 0,
        })
        .collect();
    for (k, &i) in qualifying.iter().enumerate() {
        out[i].qualifying = true;
        out[i].proportional = floors[k];
        out[i].total = floors[k];
    }
    out[winner].bonus = BONUS_SEATS;
    out[winner].total += BONUS_SEATS;

    Ok(SeatAllocation {
        entries: out,
        winner,
    })
}
