//! The classic power indices, computed through two interchangeable engines:
//! an exhaustive oracle over the coalition lattice and a generating-function
//! dynamic program that counts swings by (size, weight). Both produce the
//! same big-integer counts; all index values are exact rationals.

use num::{BigInt, BigRational, BigUint, One, Zero};
use thiserror::Error;

use crate::game::{Coalition, GameError, WeightedVotingGame, DEFAULT_ENUM_CAP};
use crate::report::render_rational;

/// Cell budget for the DP table, (n + 1) * quota cells of 16 bytes each.
pub const DP_CELL_BUDGET: u128 = 16 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Oracle,
    Dp,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::Dp => "dp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Ssi,
    BanzhafAbs,
    BanzhafNorm,
    Pgi,
    DeeganPackel,
    ColemanInitiate,
    ColemanPrevent,
    Myerson,
}

impl IndexKind {
    pub const ALL: [IndexKind; 8] = [
        IndexKind::Ssi,
        IndexKind::BanzhafAbs,
        IndexKind::BanzhafNorm,
        IndexKind::Pgi,
        IndexKind::DeeganPackel,
        IndexKind::ColemanInitiate,
        IndexKind::ColemanPrevent,
        IndexKind::Myerson,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            IndexKind::Ssi => "ssi",
            IndexKind::BanzhafAbs => "banzhaf-abs",
            IndexKind::BanzhafNorm => "banzhaf-norm",
            IndexKind::Pgi => "pgi",
            IndexKind::DeeganPackel => "deegan-packel",
            IndexKind::ColemanInitiate => "coleman-initiate",
            IndexKind::ColemanPrevent => "coleman-prevent",
            IndexKind::Myerson => "myerson",
        }
    }

    pub fn from_slug(s: &str) -> Option<IndexKind> {
        IndexKind::ALL.into_iter().find(|k| k.slug() == s)
    }

    /// Whether the index is built from the swing profile (and so has both an
    /// oracle and a DP engine). PGI and Deegan-Packel read the minimal
    /// winning list instead; Myerson reads the restricted game.
    pub fn swing_based(self) -> bool {
        matches!(
            self,
            IndexKind::Ssi
                | IndexKind::BanzhafAbs
                | IndexKind::BanzhafNorm
                | IndexKind::ColemanInitiate
                | IndexKind::ColemanPrevent
        )
    }
}

/// Per-party values of one index, with the ranking induced by the exact
/// values. Ties are grouped, never broken arbitrarily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub kind: IndexKind,
    pub values: Vec<BigRational>,
    pub ranking: Vec<Vec<usize>>,
}

impl IndexReport {
    pub fn new(kind: IndexKind, values: Vec<BigRational>) -> Self {
        let ranking = rank_descending(&values);
        IndexReport {
            kind,
            values,
            ranking,
        }
    }

    pub fn rendered(&self, precision: u32) -> Vec<String> {
        self.values
            .iter()
            .map(|v| render_rational(v, precision))
            .collect()
    }
}

/// Party ids grouped by exact value, largest first; ids ascend inside a group.
pub fn rank_descending(values: &[BigRational]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for id in order {
        match groups.last_mut() {
            Some(g) if values[g[0]] == values[id] => g.push(id),
            _ => groups.push(vec![id]),
        }
    }
    groups
}

/// c_i(s) = number of size-s subsets of the other parties that party i turns
/// winning, as big integers. The raw material for SSI, Banzhaf, and Coleman.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwingProfile {
    counts: Vec<Vec<BigUint>>,
}

impl SwingProfile {
    pub fn counts(&self) -> &[Vec<BigUint>] {
        &self.counts
    }

    /// eta_i, the total swing count of party i.
    pub fn eta(&self, i: usize) -> BigUint {
        self.counts[i].iter().sum()
    }

    pub fn etas(&self) -> Vec<BigUint> {
        (0..self.counts.len()).map(|i| self.eta(i)).collect()
    }
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("DP table needs {needed} cells, over the {budget}-cell budget; fall back to the oracle engine")]
    DpBudgetExceeded { needed: u128, budget: u128 },
    #[error("degenerate game: every party has zero swings")]
    DegenerateGame,
}

/// T[s][w] = number of subsets of all parties with size s and weight w, for
/// w strictly below the quota. Heavier subsets are never queried: swing
/// windows and the losing count both live below q.
fn dp_table(game: &WeightedVotingGame) -> Result<Vec<Vec<u128>>, IndexError> {
    let n = game.n();
    let q = game.quota();
    let needed = (n as u128 + 1) * q as u128;
    if needed > DP_CELL_BUDGET {
        return Err(IndexError::DpBudgetExceeded {
            needed,
            budget: DP_CELL_BUDGET,
        });
    }
    let qu = q as usize;
    let mut t = vec![vec![0u128; qu]; n + 1];
    t[0][0] = 1;
    for p in game.parties() {
        if p.weight >= q {
            // every subset containing this party weighs at least q
            continue;
        }
        let wp = p.weight as usize;
        for s in (1..=n).rev() {
            let (lower, upper) = t.split_at_mut(s);
            let prev = &lower[s - 1];
            let cur = &mut upper[0];
            for w in wp..qu {
                let add = prev[w - wp];
                if add != 0 {
                    cur[w] += add;
                }
            }
        }
    }
    Ok(t)
}

/// DP engine: per-party swing counts by deconvolving the global table.
/// f_i(s, w) = T(s, w) - f_i(s - 1, w - w_i) removes party i; the window
/// [q - w_i, q - 1] then collects exactly the coalitions i turns winning.
pub fn swing_profile_dp(game: &WeightedVotingGame) -> Result<SwingProfile, IndexError> {
    let n = game.n();
    let q = game.quota();
    let qu = q as usize;
    let t = dp_table(game)?;
    let mut counts: Vec<Vec<BigUint>> = Vec::with_capacity(n);
    for i in 0..n {
        let wi = game.party(i).weight;
        let mut c = vec![BigUint::zero(); n];
        if wi > 0 {
            let lo = q.saturating_sub(wi) as usize;
            let wiu = usize::try_from(wi.min(q)).expect("weight fits after min with quota");
            let mut prev = vec![0u128; qu];
            prev[0] = 1;
            c[0] = BigUint::from(prev[lo..qu].iter().sum::<u128>());
            for s in 1..n {
                let mut cur = vec![0u128; qu];
                for w in 0..qu {
                    let inner = if w >= wiu && wi < q { prev[w - wiu] } else { 0 };
                    cur[w] = t[s][w] - inner;
                }
                c[s] = BigUint::from(cur[lo..qu].iter().sum::<u128>());
                prev = cur;
            }
        }
        counts.push(c);
    }
    Ok(SwingProfile { counts })
}

/// Oracle engine: walk all 2^n coalitions. Capped; meant for validation and
/// small games.
pub fn swing_profile_oracle(game: &WeightedVotingGame) -> Result<SwingProfile, IndexError> {
    swing_profile_oracle_with_cap(game, DEFAULT_ENUM_CAP)
}

pub fn swing_profile_oracle_with_cap(
    game: &WeightedVotingGame,
    cap: usize,
) -> Result<SwingProfile, IndexError> {
    let n = game.n();
    if n > cap {
        return Err(GameError::EnumerationTooLarge { n, cap }.into());
    }
    let weights: Vec<u64> = game.parties().iter().map(|p| p.weight).collect();
    let q = game.quota();
    let mut counts = vec![vec![0u128; n]; n];
    for mask in 0u128..(1u128 << n) {
        let m = mask as u64;
        let s = m.count_ones() as usize;
        let w: u64 = Coalition::from_mask(m).members().map(|i| weights[i]).sum();
        if w < q {
            for (i, &wi) in weights.iter().enumerate() {
                if m >> i & 1 == 0 && w + wi >= q {
                    counts[i][s] += 1;
                }
            }
        }
    }
    Ok(SwingProfile {
        counts: counts
            .into_iter()
            .map(|row| row.into_iter().map(BigUint::from).collect())
            .collect(),
    })
}

pub fn swing_profile(
    game: &WeightedVotingGame,
    engine: Engine,
) -> Result<SwingProfile, IndexError> {
    match engine {
        Engine::Dp => swing_profile_dp(game),
        Engine::Oracle => swing_profile_oracle(game),
    }
}

pub fn count_winning_dp(game: &WeightedVotingGame) -> Result<BigUint, IndexError> {
    let t = dp_table(game)?;
    let losing: u128 = t.iter().map(|row| row.iter().sum::<u128>()).sum();
    Ok((BigUint::one() << game.n()) - BigUint::from(losing))
}

pub fn count_winning_oracle(game: &WeightedVotingGame) -> Result<BigUint, IndexError> {
    count_winning_oracle_with_cap(game, DEFAULT_ENUM_CAP)
}

pub fn count_winning_oracle_with_cap(
    game: &WeightedVotingGame,
    cap: usize,
) -> Result<BigUint, IndexError> {
    let n = game.n();
    if n > cap {
        return Err(GameError::EnumerationTooLarge { n, cap }.into());
    }
    let weights: Vec<u64> = game.parties().iter().map(|p| p.weight).collect();
    let mut winning: u128 = 0;
    for mask in 0u128..(1u128 << n) {
        let m = mask as u64;
        let w: u64 = Coalition::from_mask(m).members().map(|i| weights[i]).sum();
        if w >= game.quota() {
            winning += 1;
        }
    }
    Ok(BigUint::from(winning))
}

pub fn count_winning(game: &WeightedVotingGame, engine: Engine) -> Result<BigUint, IndexError> {
    match engine {
        Engine::Dp => count_winning_dp(game),
        Engine::Oracle => count_winning_oracle(game),
    }
}

/// phi_i = sum over s of c_i(s) * s! * (n - 1 - s)! / n!. Shared by SSI and
/// the Myerson index (which feeds restricted-game counts through here).
pub(crate) fn shapley_from_counts(n: usize, counts: &[Vec<BigUint>]) -> Vec<BigRational> {
    let mut fact = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        fact[k] = &fact[k - 1] * BigInt::from(k);
    }
    counts
        .iter()
        .map(|ci| {
            let mut numer = BigInt::zero();
            for (s, c) in ci.iter().enumerate() {
                if !c.is_zero() {
                    numer += BigInt::from(c.clone()) * &fact[s] * &fact[n - 1 - s];
                }
            }
            BigRational::new(numer, fact[n].clone())
        })
        .collect()
}

pub fn shapley_from_profile(game: &WeightedVotingGame, profile: &SwingProfile) -> IndexReport {
    IndexReport::new(
        IndexKind::Ssi,
        shapley_from_counts(game.n(), profile.counts()),
    )
}

pub fn shapley_shubik(game: &WeightedVotingGame) -> Result<IndexReport, IndexError> {
    shapley_shubik_with(game, Engine::Dp)
}

pub fn shapley_shubik_with(
    game: &WeightedVotingGame,
    engine: Engine,
) -> Result<IndexReport, IndexError> {
    Ok(shapley_from_profile(game, &swing_profile(game, engine)?))
}

pub fn banzhaf_from_profile(
    game: &WeightedVotingGame,
    profile: &SwingProfile,
    normalized: bool,
) -> Result<IndexReport, IndexError> {
    let etas = profile.etas();
    let (kind, denom) = if normalized {
        let total: BigUint = etas.iter().sum();
        if total.is_zero() {
            return Err(IndexError::DegenerateGame);
        }
        (IndexKind::BanzhafNorm, BigInt::from(total))
    } else {
        (
            IndexKind::BanzhafAbs,
            BigInt::from(BigUint::one() << (game.n() - 1)),
        )
    };
    let values = etas
        .into_iter()
        .map(|e| BigRational::new(BigInt::from(e), denom.clone()))
        .collect();
    Ok(IndexReport::new(kind, values))
}

pub fn banzhaf(game: &WeightedVotingGame, normalized: bool) -> Result<IndexReport, IndexError> {
    banzhaf_with(game, normalized, Engine::Dp)
}

pub fn banzhaf_with(
    game: &WeightedVotingGame,
    normalized: bool,
    engine: Engine,
) -> Result<IndexReport, IndexError> {
    banzhaf_from_profile(game, &swing_profile(game, engine)?, normalized)
}

/// CP_i = eta_i / |W|: the share of winning coalitions party i can break.
pub fn coleman_prevent_from_profile(
    game: &WeightedVotingGame,
    profile: &SwingProfile,
    winning_count: &BigUint,
) -> IndexReport {
    let denom = BigInt::from(winning_count.clone());
    let values = (0..game.n())
        .map(|i| BigRational::new(BigInt::from(profile.eta(i)), denom.clone()))
        .collect();
    IndexReport::new(IndexKind::ColemanPrevent, values)
}

/// CI_i = eta_i / (2^n - |W|): the share of losing coalitions party i can
/// complete.
pub fn coleman_initiate_from_profile(
    game: &WeightedVotingGame,
    profile: &SwingProfile,
    winning_count: &BigUint,
) -> IndexReport {
    let losing = (BigUint::one() << game.n()) - winning_count;
    let denom = BigInt::from(losing);
    let values = (0..game.n())
        .map(|i| BigRational::new(BigInt::from(profile.eta(i)), denom.clone()))
        .collect();
    IndexReport::new(IndexKind::ColemanInitiate, values)
}

pub fn coleman_prevent(game: &WeightedVotingGame) -> Result<IndexReport, IndexError> {
    coleman_prevent_with(game, Engine::Dp)
}

pub fn coleman_prevent_with(
    game: &WeightedVotingGame,
    engine: Engine,
) -> Result<IndexReport, IndexError> {
    let profile = swing_profile(game, engine)?;
    let winning = count_winning(game, engine)?;
    Ok(coleman_prevent_from_profile(game, &profile, &winning))
}

pub fn coleman_initiate(game: &WeightedVotingGame) -> Result<IndexReport, IndexError> {
    coleman_initiate_with(game, Engine::Dp)
}

pub fn coleman_initiate_with(
    game: &WeightedVotingGame,
    engine: Engine,
) -> Result<IndexReport, IndexError> {
    let profile = swing_profile(game, engine)?;
    let winning = count_winning(game, engine)?;
    Ok(coleman_initiate_from_profile(game, &profile, &winning))
}

/// delta_i = |M_i| / sum_j |M_j| over the minimal winning list.
pub fn pgi_from_mwc(
    game: &WeightedVotingGame,
    mwc: &[Coalition],
) -> Result<IndexReport, IndexError> {
    let n = game.n();
    let mut per_party = vec![0u128; n];
    for c in mwc {
        for i in c.members() {
            per_party[i] += 1;
        }
    }
    let total: u128 = per_party.iter().sum();
    if total == 0 {
        return Err(IndexError::DegenerateGame);
    }
    let denom = BigInt::from(total);
    let values = per_party
        .into_iter()
        .map(|m| BigRational::new(BigInt::from(m), denom.clone()))
        .collect();
    Ok(IndexReport::new(IndexKind::Pgi, values))
}

pub fn holler_pgi(game: &WeightedVotingGame) -> Result<IndexReport, IndexError> {
    holler_pgi_with_cap(game, DEFAULT_ENUM_CAP)
}

pub fn holler_pgi_with_cap(
    game: &WeightedVotingGame,
    cap: usize,
) -> Result<IndexReport, IndexError> {
    let mwc = game.enumerate_minimal_winning_with_cap(cap)?;
    pgi_from_mwc(game, &mwc)
}

/// rho_i = (1 / |M|) * sum over the minimal winning coalitions containing i
/// of 1 / |S|: an equal split inside each minimal winning coalition.
pub fn deegan_packel_from_mwc(
    game: &WeightedVotingGame,
    mwc: &[Coalition],
) -> Result<IndexReport, IndexError> {
    if mwc.is_empty() {
        return Err(IndexError::DegenerateGame);
    }
    let m = BigInt::from(mwc.len());
    let mut values = vec![BigRational::zero(); game.n()];
    for c in mwc {
        let share = BigRational::new(BigInt::one(), &m * BigInt::from(c.len()));
        for i in c.members() {
            values[i] += &share;
        }
    }
    Ok(IndexReport::new(IndexKind::DeeganPackel, values))
}

pub fn deegan_packel(game: &WeightedVotingGame) -> Result<IndexReport, IndexError> {
    deegan_packel_with_cap(game, DEFAULT_ENUM_CAP)
}

pub fn deegan_packel_with_cap(
    game: &WeightedVotingGame,
    cap: usize,
) -> Result<IndexReport, IndexError> {
    let mwc = game.enumerate_minimal_winning_with_cap(cap)?;
    deegan_packel_from_mwc(game, &mwc)
}
