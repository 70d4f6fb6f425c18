//! Command-line front end: `compute`, `scenario`, `apportion`, and
//! `list-scenarios`.
//!
//! Exit codes: 0 success, 1 usage or parse errors, 2 computational
//! infeasibility (enumeration caps, memory budgets, engine disagreement),
//! 3 golden mismatch under `scenario --check`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, BigUint, Signed};

use crate::apportion::{self, ApportionError, SeatAllocation};
use crate::game::{Coalition, GameError, WeightedVotingGame};
use crate::gamefile::{self, GameFileError};
use crate::indices::{self, Engine, IndexError, IndexKind, IndexReport, SwingProfile};
use crate::myerson::{self, CommunicationGraph, MyersonError};
use crate::report::{
    parse_decimal, render_rational, rounded_at, ApportionDocument, DocEntry, DocIndex, DocParty,
    DocSeat, ReportDocument,
};
use crate::scenario::{self, ScenarioError};

/// Goldens are published at two decimals; comparisons happen at that
/// precision regardless of the requested rendering precision.
const GOLDEN_PRECISION: u32 = 2;
const MAX_PRECISION: u32 = 100;
const DEFAULT_EMIT_QUOTA: u64 = 151;

/// A failed run: the message goes to stderr, the code to the shell.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn golden(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::EnumerationTooLarge { .. } => Failure::infeasible(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<IndexError> for Failure {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::Game(g) => g.into(),
            other => Failure::infeasible(other.to_string()),
        }
    }
}

impl From<MyersonError> for Failure {
    fn from(e: MyersonError) -> Self {
        match e {
            MyersonError::Game(g) => g.into(),
            other @ (MyersonError::CapExceeded { .. } | MyersonError::TooManyParties { .. }) => {
                Failure::infeasible(other.to_string())
            }
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<ApportionError> for Failure {
    fn from(e: ApportionError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GameFileError> for Failure {
    fn from(e: GameFileError) -> Self {
        match e {
            GameFileError::Game(g) => g.into(),
            GameFileError::Graph(m) => m.into(),
            GameFileError::Election(a) => a.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "votepower",
    version,
    about = "Power indices and seat apportionment for weighted voting games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute power indices for a weighted voting game.
    Compute(ComputeArgs),
    /// Run a bundled scenario and compare against its published index rows.
    Scenario(ScenarioArgs),
    /// Apportion the 300 chamber seats from a game file's vote data.
    Apportion(ApportionArgs),
    /// List the bundled scenarios.
    ListScenarios,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexArg {
    Ssi,
    BanzhafAbs,
    BanzhafNorm,
    Pgi,
    DeeganPackel,
    ColemanInitiate,
    ColemanPrevent,
    Myerson,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Oracle,
    Dp,
    Both,
}

impl EngineArg {
    fn label(self) -> &'static str {
        match self {
            EngineArg::Oracle => "oracle",
            EngineArg::Dp => "dp",
            EngineArg::Both => "both",
        }
    }

    /// The single engine to run, or None for cross-checked execution.
    fn single(self) -> Option<Engine> {
        match self {
            EngineArg::Oracle => Some(Engine::Oracle),
            EngineArg::Dp => Some(Engine::Dp),
            EngineArg::Both => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Table,
    Csv,
    Machine,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Indices to compute (repeat or comma-separate). Defaults to every
    /// index computable for the source; `all` expands the same way. An
    /// explicit `myerson` requires the source to carry edges.
    #[arg(long, value_delimiter = ',', value_name = "INDEX")]
    indices: Vec<IndexArg>,

    /// Override the game's quota before computing.
    #[arg(long)]
    quota: Option<u64>,

    /// Decimal places in rendered values.
    #[arg(long, default_value_t = 2)]
    precision: u32,

    /// Engine for the swing-based indices; `both` runs the two and fails on
    /// any disagreement.
    #[arg(long, value_enum, default_value_t = EngineArg::Dp)]
    engine: EngineArg,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,

    /// Embed the tool version in the output document.
    #[arg(long)]
    with_version: bool,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Path to a game file.
    game_file: Option<PathBuf>,

    /// Inline game literal, e.g. "[151; 108, 52, 41, 33, 26, 21, 19]".
    #[arg(long, value_name = "LITERAL")]
    game_literal: Option<String>,

    /// Use a bundled scenario's game as the source.
    #[arg(long, value_name = "NAME")]
    scenario: Option<String>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario name: may2012, june2012, or dec2014.
    name: String,

    /// Exit 3 if any computed value deviates from its published row by more
    /// than 0.01. Incompatible with --quota.
    #[arg(long)]
    check: bool,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ApportionArgs {
    /// Game file with [[votes]] entries.
    file: PathBuf,

    /// Print the induced game file (seats as weights) instead of the seat
    /// report.
    #[arg(long)]
    emit_game: bool,

    /// Quota written into the emitted game file (default 151). Requires
    /// --emit-game.
    #[arg(long)]
    quota: Option<u64>,

    /// Decimal places in rendered shares.
    #[arg(long, default_value_t = 2)]
    precision: u32,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,

    /// Embed the tool version in the output document.
    #[arg(long)]
    with_version: bool,
}

pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compute(args) => cmd_compute(args),
        Command::Scenario(args) => cmd_scenario(args),
        Command::Apportion(args) => cmd_apportion(args),
        Command::ListScenarios => {
            for s in scenario::all() {
                println!("{}: {}", s.name, s.description);
            }
            Ok(())
        }
    }
}

fn cmd_compute(args: ComputeArgs) -> Result<(), Failure> {
    check_precision(args.common.precision)?;
    let (source, game, graph) = resolve_source(&args)?;
    let game = apply_quota(&game, args.common.quota)?;
    warn_non_majority(&game);
    let kinds = resolve_kinds(&args.common.indices, graph.is_some())?;
    let reports = compute_reports(&game, graph.as_ref(), &kinds, args.common.engine)?;
    let (doc, _) = build_document(
        source,
        &game,
        args.common.engine.label(),
        args.common.precision,
        args.common.with_version,
        &reports,
        &|_| None,
    );
    emit_report(&doc, args.common.output);
    Ok(())
}

fn cmd_scenario(args: ScenarioArgs) -> Result<(), Failure> {
    check_precision(args.common.precision)?;
    if args.check && args.common.quota.is_some() {
        return Err(Failure::usage(
            "--check compares against the published rows and cannot be combined with --quota",
        ));
    }
    let s = scenario::load(&args.name)?;
    let game = apply_quota(&s.game, args.common.quota)?;
    warn_non_majority(&game);
    let kinds = resolve_kinds(&args.common.indices, s.graph.is_some())?;
    let reports = compute_reports(&game, s.graph.as_ref(), &kinds, args.common.engine)?;
    let use_goldens = args.common.quota.is_none();
    let (doc, mismatches) = build_document(
        format!("scenario:{}", s.name),
        &game,
        args.common.engine.label(),
        args.common.precision,
        args.common.with_version,
        &reports,
        &|kind| {
            if use_goldens {
                s.golden_for(kind)
            } else {
                None
            }
        },
    );
    emit_report(&doc, args.common.output);
    if args.check && mismatches > 0 {
        return Err(Failure::golden(format!(
            "{mismatches} golden cell(s) deviate by more than 0.01"
        )));
    }
    Ok(())
}

fn cmd_apportion(args: ApportionArgs) -> Result<(), Failure> {
    check_precision(args.precision)?;
    if args.quota.is_some() && !args.emit_game {
        return Err(Failure::usage(
            "--quota only applies together with --emit-game",
        ));
    }
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.file.display())))?;
    let contents = gamefile::parse_game_file(&text)?;
    let election = contents.election.ok_or_else(|| {
        Failure::usage("the game file has no [[votes]] entries to apportion from")
    })?;
    let allocation = election.allocate()?;
    if args.emit_game {
        let quota = args.quota.unwrap_or(DEFAULT_EMIT_QUOTA);
        let raw = gamefile::induced_game_file(&allocation, quota);
        raw.build()?;
        print!("{}", gamefile::render_game_file(&raw));
        return Ok(());
    }
    let doc = apportion_document(
        args.file.display().to_string(),
        &allocation,
        args.precision,
        args.with_version,
    );
    let text = match args.output {
        OutputArg::Table => doc.to_table(),
        OutputArg::Csv => doc.to_csv(),
        OutputArg::Machine => doc.to_json(),
    };
    print!("{text}");
    Ok(())
}

fn check_precision(precision: u32) -> Result<(), Failure> {
    if precision > MAX_PRECISION {
        return Err(Failure::usage(format!(
            "--precision {precision} is above the maximum of {MAX_PRECISION}"
        )));
    }
    Ok(())
}

fn resolve_source(
    args: &ComputeArgs,
) -> Result<(String, WeightedVotingGame, Option<CommunicationGraph>), Failure> {
    let picked = [
        args.game_file.is_some(),
        args.game_literal.is_some(),
        args.scenario.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if picked != 1 {
        return Err(Failure::usage(
            "give exactly one game source: a file path, --game-literal, or --scenario",
        ));
    }
    if let Some(path) = &args.game_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let contents = gamefile::parse_game_file(&text)?;
        Ok((path.display().to_string(), contents.game, contents.graph))
    } else if let Some(literal) = &args.game_literal {
        let game = gamefile::parse_game_literal(literal)?;
        Ok((literal.clone(), game, None))
    } else {
        let name = args.scenario.as_deref().expect("source checked above");
        let s = scenario::load(name)?;
        Ok((format!("scenario:{}", s.name), s.game, s.graph))
    }
}

fn apply_quota(
    game: &WeightedVotingGame,
    quota: Option<u64>,
) -> Result<WeightedVotingGame, Failure> {
    match quota {
        None => Ok(game.clone()),
        Some(q) => Ok(game.with_quota(q)?),
    }
}

fn warn_non_majority(game: &WeightedVotingGame) {
    if !game.is_majority() {
        eprintln!(
            "warning: quota {} is not a strict majority of the total weight {}; \
             indices remain defined but majority-game readings do not apply",
            game.quota(),
            game.total_weight()
        );
    }
}

const CLASSIC_KINDS: [IndexKind; 7] = [
    IndexKind::Ssi,
    IndexKind::BanzhafAbs,
    IndexKind::BanzhafNorm,
    IndexKind::Pgi,
    IndexKind::DeeganPackel,
    IndexKind::ColemanInitiate,
    IndexKind::ColemanPrevent,
];

fn resolve_kinds(requested: &[IndexArg], has_graph: bool) -> Result<Vec<IndexKind>, Failure> {
    fn push(kinds: &mut Vec<IndexKind>, kind: IndexKind) {
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    let mut kinds = Vec::new();
    let expand_all = |kinds: &mut Vec<IndexKind>| {
        for k in CLASSIC_KINDS {
            push(kinds, k);
        }
        if has_graph {
            push(kinds, IndexKind::Myerson);
        }
    };
    if requested.is_empty() {
        expand_all(&mut kinds);
        return Ok(kinds);
    }
    for arg in requested {
        match arg {
            IndexArg::All => expand_all(&mut kinds),
            IndexArg::Myerson => {
                if !has_graph {
                    return Err(Failure::usage(
                        "the Myerson index needs a communication graph; the game source has no edges",
                    ));
                }
                push(&mut kinds, IndexKind::Myerson);
            }
            IndexArg::Ssi => push(&mut kinds, IndexKind::Ssi),
            IndexArg::BanzhafAbs => push(&mut kinds, IndexKind::BanzhafAbs),
            IndexArg::BanzhafNorm => push(&mut kinds, IndexKind::BanzhafNorm),
            IndexArg::Pgi => push(&mut kinds, IndexKind::Pgi),
            IndexArg::DeeganPackel => push(&mut kinds, IndexKind::DeeganPackel),
            IndexArg::ColemanInitiate => push(&mut kinds, IndexKind::ColemanInitiate),
            IndexArg::ColemanPrevent => push(&mut kinds, IndexKind::ColemanPrevent),
        }
    }
    Ok(kinds)
}

/// Lazily computed per-run artifacts shared across the requested indices.
struct ComputeCtx<'a> {
    game: &'a WeightedVotingGame,
    engine: EngineArg,
    profile: Option<SwingProfile>,
    winning: Option<BigUint>,
    mwc: Option<Vec<Coalition>>,
}

impl ComputeCtx<'_> {
    fn ensure_profile(&mut self) -> Result<(), Failure> {
        if self.profile.is_some() {
            return Ok(());
        }
        let profile = match self.engine.single() {
            Some(engine) => indices::swing_profile(self.game, engine)?,
            None => {
                let dp = indices::swing_profile(self.game, Engine::Dp)?;
                let oracle = indices::swing_profile(self.game, Engine::Oracle)?;
                if dp != oracle {
                    return Err(Failure::infeasible(
                        "the dp and oracle engines disagree on the swing profile",
                    ));
                }
                dp
            }
        };
        self.profile = Some(profile);
        Ok(())
    }

    fn ensure_winning(&mut self) -> Result<(), Failure> {
        if self.winning.is_some() {
            return Ok(());
        }
        let winning = match self.engine.single() {
            Some(engine) => indices::count_winning(self.game, engine)?,
            None => {
                let dp = indices::count_winning(self.game, Engine::Dp)?;
                let oracle = indices::count_winning(self.game, Engine::Oracle)?;
                if dp != oracle {
                    return Err(Failure::infeasible(
                        "the dp and oracle engines disagree on the winning-coalition count",
                    ));
                }
                dp
            }
        };
        self.winning = Some(winning);
        Ok(())
    }

    fn ensure_mwc(&mut self) -> Result<(), Failure> {
        if self.mwc.is_none() {
            self.mwc = Some(self.game.enumerate_minimal_winning()?);
        }
        Ok(())
    }
}

fn compute_reports(
    game: &WeightedVotingGame,
    graph: Option<&CommunicationGraph>,
    kinds: &[IndexKind],
    engine: EngineArg,
) -> Result<Vec<IndexReport>, Failure> {
    let mut ctx = ComputeCtx {
        game,
        engine,
        profile: None,
        winning: None,
        mwc: None,
    };
    let mut out = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let report = match kind {
            IndexKind::Ssi => {
                ctx.ensure_profile()?;
                indices::shapley_from_profile(game, ctx.profile.as_ref().expect("ensured"))
            }
            IndexKind::BanzhafAbs => {
                ctx.ensure_profile()?;
                indices::banzhaf_from_profile(game, ctx.profile.as_ref().expect("ensured"), false)?
            }
            IndexKind::BanzhafNorm => {
                ctx.ensure_profile()?;
                indices::banzhaf_from_profile(game, ctx.profile.as_ref().expect("ensured"), true)?
            }
            IndexKind::ColemanPrevent => {
                ctx.ensure_profile()?;
                ctx.ensure_winning()?;
                indices::coleman_prevent_from_profile(
                    game,
                    ctx.profile.as_ref().expect("ensured"),
                    ctx.winning.as_ref().expect("ensured"),
                )
            }
            IndexKind::ColemanInitiate => {
                ctx.ensure_profile()?;
                ctx.ensure_winning()?;
                indices::coleman_initiate_from_profile(
                    game,
                    ctx.profile.as_ref().expect("ensured"),
                    ctx.winning.as_ref().expect("ensured"),
                )
            }
            IndexKind::Pgi => {
                ctx.ensure_mwc()?;
                indices::pgi_from_mwc(game, ctx.mwc.as_deref().expect("ensured"))?
            }
            IndexKind::DeeganPackel => {
                ctx.ensure_mwc()?;
                indices::deegan_packel_from_mwc(game, ctx.mwc.as_deref().expect("ensured"))?
            }
            IndexKind::Myerson => {
                let Some(graph) = graph else {
                    return Err(Failure::usage(
                        "the Myerson index needs a communication graph; the game source has no edges",
                    ));
                };
                myerson::myerson_index(game, graph)?
            }
        };
        out.push(report);
    }
    Ok(out)
}

fn seat_share_block(game: &WeightedVotingGame, precision: u32) -> DocIndex {
    let total = BigInt::from(game.total_weight());
    let values: Vec<BigRational> = game
        .parties()
        .iter()
        .map(|p| BigRational::new(BigInt::from(p.weight), total.clone()))
        .collect();
    let entries = game
        .parties()
        .iter()
        .zip(&values)
        .map(|(p, v)| DocEntry {
            party: p.name.clone(),
            numerator: v.numer().to_string(),
            denominator: v.denom().to_string(),
            rendered: render_rational(v, precision),
            golden: None,
            delta: None,
        })
        .collect();
    let ranking = indices::rank_descending(&values)
        .iter()
        .map(|group| group.iter().map(|&i| game.party(i).name.clone()).collect())
        .collect();
    DocIndex {
        index: "seat-share".to_string(),
        entries,
        ranking,
        golden_mismatches: None,
    }
}

fn index_block(
    game: &WeightedVotingGame,
    report: &IndexReport,
    precision: u32,
    golden: Option<&'static [&'static str]>,
) -> (DocIndex, usize) {
    let tolerance = BigRational::new(BigInt::from(1), BigInt::from(100));
    let mut mismatches = 0usize;
    let mut entries = Vec::with_capacity(game.n());
    for (i, value) in report.values.iter().enumerate() {
        let mut golden_cell = None;
        let mut delta_cell = None;
        if let Some(cells) = golden {
            let cell = cells[i];
            let golden_value = parse_decimal(cell).expect("golden cells are decimal literals");
            let delta = rounded_at(value, GOLDEN_PRECISION) - &golden_value;
            if delta.abs() > tolerance {
                mismatches += 1;
            }
            golden_cell = Some(cell.to_string());
            delta_cell = Some(render_rational(&delta, GOLDEN_PRECISION));
        }
        entries.push(DocEntry {
            party: game.party(i).name.clone(),
            numerator: value.numer().to_string(),
            denominator: value.denom().to_string(),
            rendered: render_rational(value, precision),
            golden: golden_cell,
            delta: delta_cell,
        });
    }
    let ranking = report
        .ranking
        .iter()
        .map(|group| group.iter().map(|&i| game.party(i).name.clone()).collect())
        .collect();
    let block = DocIndex {
        index: report.kind.slug().to_string(),
        entries,
        ranking,
        golden_mismatches: golden.map(|_| mismatches),
    };
    (block, mismatches)
}

fn build_document(
    source: String,
    game: &WeightedVotingGame,
    engine_label: &str,
    precision: u32,
    with_version: bool,
    reports: &[IndexReport],
    golden_for: &dyn Fn(IndexKind) -> Option<&'static [&'static str]>,
) -> (ReportDocument, usize) {
    let mut total_mismatches = 0usize;
    let mut blocks = vec![seat_share_block(game, precision)];
    for report in reports {
        let (block, mismatches) = index_block(game, report, precision, golden_for(report.kind));
        total_mismatches += mismatches;
        blocks.push(block);
    }
    let doc = ReportDocument {
        source,
        quota: game.quota(),
        total_weight: game.total_weight(),
        parties: game
            .parties()
            .iter()
            .map(|p| DocParty {
                name: p.name.clone(),
                weight: p.weight,
            })
            .collect(),
        engine: engine_label.to_string(),
        precision,
        version: with_version.then(|| env!("CARGO_PKG_VERSION").to_string()),
        indices: blocks,
    };
    (doc, total_mismatches)
}

fn emit_report(doc: &ReportDocument, output: OutputArg) {
    let text = match output {
        OutputArg::Table => doc.to_table(),
        OutputArg::Csv => doc.to_csv(),
        OutputArg::Machine => doc.to_json(),
    };
    print!("{text}");
}

fn apportion_document(
    source: String,
    allocation: &SeatAllocation,
    precision: u32,
    with_version: bool,
) -> ApportionDocument {
    let hundred = BigRational::from_integer(100.into());
    ApportionDocument {
        source,
        threshold: render_rational(&apportion::threshold(), GOLDEN_PRECISION),
        total_seats: apportion::TOTAL_SEATS,
        proportional_seats: apportion::PROPORTIONAL_SEATS,
        bonus_seats: apportion::BONUS_SEATS,
        winner: allocation.entries[allocation.winner].name.clone(),
        entries: allocation
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| DocSeat {
                party: e.name.clone(),
                share_numerator: e.share.numer().to_string(),
                share_denominator: e.share.denom().to_string(),
                share_percent: render_rational(&(&e.share * &hundred), precision),
                qualifying: e.qualifying,
                proportional: e.proportional,
                bonus: e.bonus,
                total: e.total,
                winner: i == allocation.winner,
            })
            .collect(),
        induced_game: None,
        version: with_version.then(|| env!("CARGO_PKG_VERSION").to_string()),
    }
}
