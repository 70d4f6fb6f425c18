//! Acceptance gate: eleven criteria over the bundled scenarios and the
//! randomized engine checks. Each criterion prints exactly one PASS/FAIL
//! line; the gate fails if any criterion does.

use std::time::{Duration, Instant};

use num::{BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use votepower::indices::{
    banzhaf_from_profile, coleman_initiate_from_profile, coleman_prevent_from_profile,
    count_winning_dp, count_winning_oracle, deegan_packel_from_mwc, holler_pgi, pgi_from_mwc,
    shapley_from_profile, shapley_shubik, swing_profile_dp, swing_profile_oracle, IndexKind,
    IndexReport,
};
use votepower::myerson::{myerson_index, CommunicationGraph};
use votepower::report::{parse_decimal, rounded_at};
use votepower::scenario;
use votepower::{Coalition, WeightedVotingGame};

type Criterion = fn() -> Result<(), String>;

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &'static str, Criterion)> = vec![
        (1, "may2012 SSI row, exact sum 1, under 1s", criterion_1),
        (
            2,
            "may2012 PGI row, exact sum 1, SYRIZA second to last",
            criterion_2,
        ),
        (3, "may2012 Myerson row, GD zero, DIMAR second", criterion_3),
        (
            4,
            "june2012 SSI and PGI rows, SSI ties SYRIZA with PASOK",
            criterion_4,
        ),
        (
            5,
            "june2012 Myerson row plus SYRIZA down / PASOK up vs may",
            criterion_5,
        ),
        (
            6,
            "dec2014 SSI, PGI, Coleman rows, prevent(ND) exactly 1",
            criterion_6,
        ),
        (
            7,
            "engine equivalence on 500 random games, under 60s",
            criterion_7,
        ),
        (
            8,
            "SSI and Banzhaf rank identically on 1000 majority games",
            criterion_8,
        ),
        (
            9,
            "index laws hold on randomized games up to n = 12",
            criterion_9,
        ),
        (
            10,
            "apportionment reproduces may seats, june within one seat",
            criterion_10,
        ),
        (
            11,
            "june {ND, PASOK, DIMAR} wins but is not minimal",
            criterion_11,
        ),
    ];

    let mut failures = 0usize;
    for (num, desc, run) in &criteria {
        match run() {
            Ok(()) => println!("criterion {num}: PASS - {desc}"),
            Err(detail) => {
                println!("criterion {num}: FAIL - {desc}: {detail}");
                failures += 1;
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

/// |rounded(value, 2) - golden| <= 1/100, the print tolerance of the
/// reference tables.
fn golden_cell(value: &BigRational, golden: &str) -> Result<(), String> {
    let want = parse_decimal(golden).ok_or_else(|| format!("bad golden literal {golden:?}"))?;
    let delta = rounded_at(value, 2) - want;
    let tol = BigRational::new(1.into(), 100.into());
    if delta.abs() > tol {
        return Err(format!(
            "value {value} rounds to {}, golden is {golden}",
            rounded_at(value, 2)
        ));
    }
    Ok(())
}

fn golden_row(report: &IndexReport, names: &[&str], goldens: &[&str]) -> Result<(), String> {
    let mut misses = Vec::new();
    for (i, golden) in goldens.iter().enumerate() {
        if let Err(detail) = golden_cell(&report.values[i], golden) {
            misses.push(format!("{}: {detail}", names[i]));
        }
    }
    if misses.is_empty() {
        Ok(())
    } else {
        Err(misses.join("; "))
    }
}

fn sums_to_one(report: &IndexReport, label: &str) -> Result<(), String> {
    let sum: BigRational = report.values.iter().sum();
    if sum != BigRational::one() {
        return Err(format!("{label} sums to {sum}, not 1"));
    }
    Ok(())
}

fn scenario_names(game: &WeightedVotingGame) -> Vec<&str> {
    game.parties().iter().map(|p| p.name.as_str()).collect()
}

fn golden(s: &scenario::Scenario, kind: IndexKind) -> Result<&'static [&'static str], String> {
    s.golden_for(kind)
        .ok_or_else(|| format!("scenario {} has no {} golden", s.name, kind.slug()))
}

// Criterion 1: may2012 SSI on [151; 108, 52, 41, 33, 26, 21, 19] matches the
// reference row within a cent per entry, sums to 1 exactly, in under 1s.
fn criterion_1() -> Result<(), String> {
    let start = Instant::now();
    let game = WeightedVotingGame::from_weights(151, &[108, 52, 41, 33, 26, 21, 19]).map_err(e)?;
    let ssi = shapley_shubik(&game).map_err(e)?;
    let names = ["ND", "SYRIZA", "PASOK", "ANEL", "KKE", "GD", "DIMAR"];
    golden_row(
        &ssi,
        &names,
        &["0.46", "0.16", "0.09", "0.09", "0.09", "0.06", "0.06"],
    )?;
    sums_to_one(&ssi, "SSI")?;

    // Same game under scenario party order must match the bundled golden.
    let may = scenario::load("may2012").map_err(e)?;
    let bundled = shapley_shubik(&may.game).map_err(e)?;
    golden_row(
        &bundled,
        &scenario_names(&may.game),
        golden(&may, IndexKind::Ssi)?,
    )?;

    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}, limit is 1s"));
    }
    Ok(())
}

// Criterion 2: may2012 PGI matches the reference row, sums to 1 exactly, and
// ranks SYRIZA strictly below KKE, PASOK, and ANEL.
fn criterion_2() -> Result<(), String> {
    let may = scenario::load("may2012").map_err(e)?;
    let pgi = holler_pgi(&may.game).map_err(e)?;
    golden_row(
        &pgi,
        &scenario_names(&may.game),
        golden(&may, IndexKind::Pgi)?,
    )?;
    sums_to_one(&pgi, "PGI")?;

    let idx = |name| may.game.index_of(name).unwrap();
    let syriza = &pgi.values[idx("SYRIZA")];
    for other in ["KKE", "PASOK", "ANEL"] {
        if syriza >= &pgi.values[idx(other)] {
            return Err(format!("PGI(SYRIZA) = {syriza} is not below PGI({other})"));
        }
    }
    Ok(())
}

// Criterion 3: may2012 Myerson matches the reference row, GD is exactly 0,
// and DIMAR is strictly second-highest.
fn criterion_3() -> Result<(), String> {
    let may = scenario::load("may2012").map_err(e)?;
    let graph = may.graph.as_ref().ok_or("may2012 has no graph")?;
    let myerson = myerson_index(&may.game, graph).map_err(e)?;

    let mut problems = Vec::new();
    if let Err(detail) = golden_row(
        &myerson,
        &scenario_names(&may.game),
        golden(&may, IndexKind::Myerson)?,
    ) {
        problems.push(detail);
    }

    let idx = |name| may.game.index_of(name).unwrap();
    if !myerson.values[idx("GD")].is_zero() {
        problems.push(format!(
            "Myerson(GD) = {}, not 0",
            myerson.values[idx("GD")]
        ));
    }

    let dimar = &myerson.values[idx("DIMAR")];
    let nd = &myerson.values[idx("ND")];
    let mut second_highest = dimar < nd;
    for party in ["KKE", "SYRIZA", "PASOK", "ANEL", "GD"] {
        second_highest &= dimar > &myerson.values[idx(party)];
    }
    if !second_highest {
        problems.push(format!(
            "DIMAR = {dimar} is not strictly second-highest (ND = {nd})"
        ));
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}

// Criterion 4: june2012 SSI and PGI match the reference rows; SSI gives
// SYRIZA and PASOK exactly equal values.
fn criterion_4() -> Result<(), String> {
    let june = scenario::load("june2012").map_err(e)?;
    let names = scenario_names(&june.game);
    let ssi = shapley_shubik(&june.game).map_err(e)?;
    golden_row(&ssi, &names, golden(&june, IndexKind::Ssi)?)?;
    let pgi = holler_pgi(&june.game).map_err(e)?;
    golden_row(&pgi, &names, golden(&june, IndexKind::Pgi)?)?;

    let idx = |name| june.game.index_of(name).unwrap();
    let (syriza, pasok) = (&ssi.values[idx("SYRIZA")], &ssi.values[idx("PASOK")]);
    if syriza != pasok {
        return Err(format!(
            "SSI(SYRIZA) = {syriza} differs from SSI(PASOK) = {pasok}"
        ));
    }
    Ok(())
}

// Criterion 5: june2012 Myerson matches the reference row, and against the
// may reference values SYRIZA moved down while PASOK moved up even though
// their seat counts moved the other way.
fn criterion_5() -> Result<(), String> {
    let june = scenario::load("june2012").map_err(e)?;
    let graph = june.graph.as_ref().ok_or("june2012 has no graph")?;
    let myerson = myerson_index(&june.game, graph).map_err(e)?;
    golden_row(
        &myerson,
        &scenario_names(&june.game),
        golden(&june, IndexKind::Myerson)?,
    )?;

    let may = scenario::load("may2012").map_err(e)?;
    let may_golden = golden(&may, IndexKind::Myerson)?;
    let idx = |name: &str| may.game.index_of(name).unwrap();
    let may_at = |name: &str| parse_decimal(may_golden[idx(name)]).unwrap();

    let syriza = &myerson.values[june.game.index_of("SYRIZA").unwrap()];
    let pasok = &myerson.values[june.game.index_of("PASOK").unwrap()];
    if syriza >= &may_at("SYRIZA") {
        return Err(format!(
            "Myerson(SYRIZA) = {syriza} did not drop below the may value {}",
            may_at("SYRIZA")
        ));
    }
    if pasok <= &may_at("PASOK") {
        return Err(format!(
            "Myerson(PASOK) = {pasok} did not rise above the may value {}",
            may_at("PASOK")
        ));
    }
    Ok(())
}

// Criterion 6: dec2014 at quota 180 matches the SSI, PGI, and both Coleman
// rows; Coleman-prevent for ND is exactly 1 (the other six weigh 171 < 180).
fn criterion_6() -> Result<(), String> {
    let dec = scenario::load("dec2014").map_err(e)?;
    if dec.game.quota() != 180 {
        return Err(format!("dec2014 quota is {}, not 180", dec.game.quota()));
    }
    let names = scenario_names(&dec.game);
    let profile = swing_profile_dp(&dec.game).map_err(e)?;
    let winning = count_winning_dp(&dec.game).map_err(e)?;

    golden_row(
        &shapley_from_profile(&dec.game, &profile),
        &names,
        golden(&dec, IndexKind::Ssi)?,
    )?;
    golden_row(
        &holler_pgi(&dec.game).map_err(e)?,
        &names,
        golden(&dec, IndexKind::Pgi)?,
    )?;
    let prevent = coleman_prevent_from_profile(&dec.game, &profile, &winning);
    golden_row(&prevent, &names, golden(&dec, IndexKind::ColemanPrevent)?)?;
    golden_row(
        &coleman_initiate_from_profile(&dec.game, &profile, &winning),
        &names,
        golden(&dec, IndexKind::ColemanInitiate)?,
    )?;

    let nd = &prevent.values[dec.game.index_of("ND").unwrap()];
    if nd != &BigRational::one() {
        return Err(format!("Coleman-prevent(ND) = {nd}, not exactly 1"));
    }
    Ok(())
}

fn random_game(rng: &mut ChaCha8Rng, max_n: usize, max_weight: u64) -> WeightedVotingGame {
    let n = rng.gen_range(1..=max_n);
    let mut weights: Vec<u64> = (0..n)
        .map(|_| {
            if rng.gen_ratio(1, 10) {
                0
            } else {
                rng.gen_range(1..=max_weight)
            }
        })
        .collect();
    if weights.iter().sum::<u64>() == 0 {
        weights[0] = 1;
    }
    let total: u64 = weights.iter().sum();
    let quota = rng.gen_range(1..=total);
    WeightedVotingGame::from_weights(quota, &weights).expect("random game is valid")
}

// Criterion 7: on 500 random games (n <= 15, weights <= 200, random valid
// quota) the DP engine and the exhaustive oracle agree exactly on the swing
// profile and the winning-coalition count, in under 60s total.
fn criterion_7() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0007);
    for trial in 0..500 {
        let game = random_game(&mut rng, 15, 200);
        let dp = swing_profile_dp(&game).map_err(e)?;
        let oracle = swing_profile_oracle(&game).map_err(e)?;
        if dp != oracle {
            return Err(format!(
                "trial {trial}: engines disagree on [{}; {:?}]",
                game.quota(),
                game.parties().iter().map(|p| p.weight).collect::<Vec<_>>()
            ));
        }
        let wins_dp = count_winning_dp(&game).map_err(e)?;
        let wins_oracle = count_winning_oracle(&game).map_err(e)?;
        if wins_dp != wins_oracle {
            return Err(format!(
                "trial {trial}: winning counts disagree, dp {wins_dp} vs oracle {wins_oracle}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}, limit is 60s"));
    }
    Ok(())
}

// Criterion 8: on 1000 random majority games (n <= 10, 2q > total) SSI and
// Banzhaf produce identical rankings, tie groups included.
fn criterion_8() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0008);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=10usize);
        let mut weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=200u64)).collect();
        if weights.iter().sum::<u64>() == 0 {
            weights[0] = 1;
        }
        let total: u64 = weights.iter().sum();
        let quota = rng.gen_range(total / 2 + 1..=total);
        let game =
            WeightedVotingGame::from_weights(quota, &weights).expect("majority game is valid");
        if !game.is_majority() {
            return Err(format!("trial {trial}: generated a non-majority game"));
        }

        let profile = swing_profile_dp(&game).map_err(e)?;
        let ssi = shapley_from_profile(&game, &profile);
        let banzhaf = banzhaf_from_profile(&game, &profile, false).map_err(e)?;
        if ssi.ranking != banzhaf.ranking {
            return Err(format!(
                "trial {trial}: [{}; {:?}] SSI ranks {:?}, Banzhaf ranks {:?}",
                game.quota(),
                game.parties().iter().map(|p| p.weight).collect::<Vec<_>>(),
                ssi.ranking,
                banzhaf.ranking
            ));
        }
    }
    Ok(())
}

// Criterion 9: efficiency, symmetry, null players, zero-weight null players,
// complete-graph Myerson = SSI, and the blocking definition, on 300 random
// games with n <= 12.
fn criterion_9() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0009);
    for trial in 0..300 {
        let game = random_game(&mut rng, 12, 60);
        let fail = |law: &str, detail: String| {
            Err(format!(
                "trial {trial}, [{}; {:?}]: {law}: {detail}",
                game.quota(),
                game.parties().iter().map(|p| p.weight).collect::<Vec<_>>()
            ))
        };

        let profile = swing_profile_dp(&game).map_err(e)?;
        let ssi = shapley_from_profile(&game, &profile);
        let banzhaf = banzhaf_from_profile(&game, &profile, true).map_err(e)?;
        let mwc = game.enumerate_minimal_winning().map_err(e)?;
        let pgi = pgi_from_mwc(&game, &mwc).map_err(e)?;
        let dp = deegan_packel_from_mwc(&game, &mwc).map_err(e)?;

        // Efficiency: SSI, normalized Banzhaf, PGI, and Deegan-Packel each
        // distribute exactly one unit.
        for report in [&ssi, &banzhaf, &pgi, &dp] {
            let sum: BigRational = report.values.iter().sum();
            if sum != BigRational::one() {
                return fail(
                    "efficiency",
                    format!("{} sums to {sum}", report.kind.slug()),
                );
            }
        }

        // Symmetry: equal weights mean equal values under every index.
        for i in 0..game.n() {
            for j in i + 1..game.n() {
                if game.party(i).weight != game.party(j).weight {
                    continue;
                }
                for report in [&ssi, &banzhaf, &pgi, &dp] {
                    if report.values[i] != report.values[j] {
                        return fail(
                            "symmetry",
                            format!(
                                "{} splits equal-weight parties {i} and {j}",
                                report.kind.slug()
                            ),
                        );
                    }
                }
            }
        }

        // Null players score zero everywhere; zero weight implies null.
        for i in 0..game.n() {
            let null = game.is_null(i).map_err(e)?;
            if game.party(i).weight == 0 && !null {
                return fail("zero-weight null", format!("party {i} is not null"));
            }
            if null {
                for report in [&ssi, &banzhaf, &pgi, &dp] {
                    if !report.values[i].is_zero() {
                        return fail(
                            "null player",
                            format!("{} gives null party {i} a share", report.kind.slug()),
                        );
                    }
                }
            }
        }

        // Complete communication restricts nothing: Myerson equals SSI.
        // The restricted game needs a majority base, so non-majority draws
        // are re-quotaed to total/2 + 1 before the comparison.
        let majority = if game.is_majority() {
            game.clone()
        } else {
            game.with_quota(game.total_weight() / 2 + 1).map_err(e)?
        };
        let complete = CommunicationGraph::complete(majority.n());
        let myerson = myerson_index(&majority, &complete).map_err(e)?;
        let majority_ssi = shapley_shubik(&majority).map_err(e)?;
        if myerson.values != majority_ssi.values {
            return fail("complete-graph Myerson", "differs from SSI".to_string());
        }

        // Blocking: S blocks iff S loses and its complement loses, which for
        // weighted games is w(S) < q and total - w(S) < q.
        let full = game.grand_coalition().mask();
        for _ in 0..50 {
            let s = Coalition::from_mask(rng.gen_range(0..=full) & full);
            let w = game.weight_of(s);
            let by_weights = w < game.quota() && game.total_weight() - w < game.quota();
            if game.is_blocking(s) != by_weights {
                return fail("blocking", format!("mask {:#b} misclassified", s.mask()));
            }
        }
    }
    Ok(())
}

// Criterion 10: largest-remainder apportionment reproduces the may2012 seat
// row exactly; june2012 lands within one seat per party, with the known
// one-seat gap on ND (computed 128, published 129) asserted as such.
fn criterion_10() -> Result<(), String> {
    let may = scenario::load("may2012").map_err(e)?;
    let election = may.election.as_ref().ok_or("may2012 has no vote shares")?;
    let allocation = election.allocate().map_err(e)?;
    let want_may: &[(&str, u64)] = &[
        ("ND", 108),
        ("SYRIZA", 52),
        ("PASOK", 41),
        ("ANEL", 33),
        ("KKE", 26),
        ("GD", 21),
        ("DIMAR", 19),
    ];
    for &(name, seats) in want_may {
        let entry = allocation
            .entries
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| format!("may2012 allocation lost {name}"))?;
        if entry.total != seats {
            return Err(format!(
                "may2012 {name}: computed {}, expected {seats}",
                entry.total
            ));
        }
    }
    if allocation.entries[allocation.winner].name != "ND" {
        return Err("may2012 winner is not ND".to_string());
    }

    let june = scenario::load("june2012").map_err(e)?;
    let election = june
        .election
        .as_ref()
        .ok_or("june2012 has no vote shares")?;
    let allocation = election.allocate().map_err(e)?;
    let published: &[(&str, u64)] = &[
        ("ND", 129),
        ("SYRIZA", 71),
        ("PASOK", 33),
        ("ANEL", 20),
        ("GD", 18),
        ("DIMAR", 17),
        ("KKE", 12),
    ];
    for &(name, seats) in published {
        let entry = allocation
            .entries
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| format!("june2012 allocation lost {name}"))?;
        if entry.total.abs_diff(seats) > 1 {
            return Err(format!(
                "june2012 {name}: computed {} is more than one seat from {seats}",
                entry.total
            ));
        }
    }
    // The published june row gives ND 129; the vote shares produce 128, with
    // the last remainder seat going to SYRIZA instead.
    let nd = allocation
        .entries
        .iter()
        .find(|s| s.name == "ND")
        .ok_or("june2012 allocation lost ND")?;
    if nd.total != 128 {
        return Err(format!(
            "june2012 ND: computed {}, expected the known 128 (published 129)",
            nd.total
        ));
    }
    let syriza = allocation
        .entries
        .iter()
        .find(|s| s.name == "SYRIZA")
        .ok_or("june2012 allocation lost SYRIZA")?;
    if syriza.total != 72 {
        return Err(format!(
            "june2012 SYRIZA: computed {}, expected the known 72 (published 71)",
            syriza.total
        ));
    }
    if allocation.seats().iter().sum::<u64>() != 300 {
        return Err("june2012 seats do not sum to 300".to_string());
    }
    Ok(())
}

// Criterion 11: in june2012 the coalition {ND, PASOK, DIMAR} is winning but
// not minimal, since {ND, PASOK} already meets the quota.
fn criterion_11() -> Result<(), String> {
    let june = scenario::load("june2012").map_err(e)?;
    let idx = |name: &str| june.game.index_of(name).unwrap();
    let trio = Coalition::from_members([idx("ND"), idx("PASOK"), idx("DIMAR")]);
    if !june.game.is_winning(trio) {
        return Err("{ND, PASOK, DIMAR} is not winning".to_string());
    }
    let mwc = june.game.enumerate_minimal_winning().map_err(e)?;
    if mwc.contains(&trio) {
        return Err("{ND, PASOK, DIMAR} appears in the minimal winning list".to_string());
    }
    let pair = Coalition::from_members([idx("ND"), idx("PASOK")]);
    if !june.game.is_winning(pair) {
        return Err("{ND, PASOK} unexpectedly loses".to_string());
    }
    if !mwc.contains(&pair) {
        return Err("{ND, PASOK} missing from the minimal winning list".to_string());
    }
    Ok(())
}
