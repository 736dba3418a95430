//! Checking Builder strategies against every Painter, or against many.
//!
//! Exhaustive mode walks the binary tree of Painter choices. A branch is a
//! list of decisions, one per round where both colors are legal; the
//! strategy is rebuilt and replayed from scratch for every leaf.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::board::{Color, VertexId};
use crate::game::{play_strategy, GameConfig, GameState, LegalColors, PainterError, PainterPolicy, Status, Strategy, Transcript};
use crate::painters::PainterSpec;

/// Exhaustive runs refuse bounds above this.
pub const MAX_EXHAUSTIVE_BOUND: usize = 30;
/// Failure records kept per report; the total is always counted.
pub const MAX_RECORDED_FAILURES: usize = 8;

pub type BuilderFactory<'a> = dyn Fn() -> Box<dyn Strategy> + Sync + 'a;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Randomized { trials: usize, seed: u64 },
}

impl Mode {
    fn label(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Randomized { .. } => "randomized",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    /// Painter that produced the game, as a `PainterSpec` string.
    pub painter: String,
    pub rounds: usize,
    pub outcome: Status,
    pub problems: Vec<String>,
    pub witness_path: Option<String>,
    #[serde(skip)]
    pub witness: Transcript,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub builder: String,
    pub k: usize,
    pub n: usize,
    pub mode: Mode,
    pub max_rounds_observed: usize,
    pub bound: usize,
    pub leaves_explored: u64,
    pub failure_count: u64,
    pub invariant_failures: Vec<FailureRecord>,
    /// Sums of the strategy's named counters over all games.
    pub counters: BTreeMap<String, u64>,
    pub status: VerifyStatus,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("exhaustive search needs bound <= {MAX_EXHAUSTIVE_BOUND}, got {0}")]
    Infeasible(usize),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("no painters given")]
    NoPainters,
    #[error(transparent)]
    Game(#[from] crate::game::GameError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// What one finished game contributes to a report.
#[derive(Default)]
struct Tally {
    leaves: u64,
    max_rounds: usize,
    failures: u64,
    records: Vec<FailureRecord>,
    counters: BTreeMap<String, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.leaves += other.leaves;
        self.max_rounds = self.max_rounds.max(other.max_rounds);
        self.failures += other.failures;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.records.len());
        self.records.extend(other.records.into_iter().take(room));
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self
    }

    fn into_report(self, strategy: &dyn Strategy, mode: Mode, bound: usize) -> VerifyReport {
        let cfg = strategy.config();
        let status = if self.failures == 0 && self.max_rounds <= bound {
            VerifyStatus::Pass
        } else {
            VerifyStatus::Fail
        };
        VerifyReport {
            builder: strategy.name().to_string(),
            k: cfg.k,
            n: cfg.n,
            mode,
            max_rounds_observed: self.max_rounds,
            bound,
            leaves_explored: self.leaves,
            failure_count: self.failures,
            invariant_failures: self.records,
            counters: self.counters,
            status,
        }
    }
}

/// Plays one game and judges it against `bound`.
fn judge(strategy: &mut dyn Strategy, painter: &mut dyn PainterPolicy, config: &GameConfig, bound: usize, label: impl FnOnce() -> String) -> Result<Tally, VerifyError> {
    let played = play_strategy(strategy, painter, config)?;
    let rounds = played.transcript.rounds;
    let mut problems = Vec::new();
    if let Some(f) = &played.failure {
        problems.push(f.to_string());
    }
    if played.state.status != Status::BlueWin {
        problems.push(format!("game ended with {}", played.state.status));
    }
    if rounds > bound {
        problems.push(format!("{rounds} rounds above bound {bound}"));
    }
    problems.extend(strategy.audit(&played.state));
    let mut t = Tally {
        leaves: 1,
        max_rounds: rounds,
        ..Tally::default()
    };
    for (name, v) in strategy.counters() {
        *t.counters.entry(name.to_string()).or_default() += v as u64;
    }
    if !problems.is_empty() {
        log::debug!("{} failure after {rounds} rounds: {}", strategy.name(), problems.join("; "));
        t.failures = 1;
        t.records.push(FailureRecord {
            painter: label(),
            rounds,
            outcome: played.state.status,
            problems,
            witness_path: None,
            witness: played.transcript,
        });
    }
    Ok(t)
}

/// Answers choice rounds from `decisions`, then Red, remembering each choice round.
struct BranchPainter<'a> {
    decisions: &'a [bool],
    choice_rounds: Vec<usize>,
}

impl PainterPolicy for BranchPainter<'_> {
    fn choose_color(&mut self, state: &GameState, _: VertexId, _: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        if !legal.is_choice() {
            return Ok(legal.iter().next().expect("legal sets are nonempty"));
        }
        let i = self.choice_rounds.len();
        self.choice_rounds.push(state.round);
        Ok(if self.decisions.get(i).copied().unwrap_or(false) {
            Color::Blue
        } else {
            Color::Red
        })
    }
}

/// Round-indexed script reproducing a branch with the `scripted` painter.
fn script_bits(decisions: &[bool], choice_rounds: &[usize], rounds: usize) -> Vec<bool> {
    let mut bits = vec![false; rounds];
    for (i, &r) in choice_rounds.iter().enumerate() {
        bits[r] = decisions.get(i).copied().unwrap_or(false);
    }
    bits
}

fn explore(factory: &BuilderFactory<'_>, config: &GameConfig, bound: usize, prefix: Vec<bool>) -> Result<Tally, VerifyError> {
    let mut strategy = factory();
    let mut painter = BranchPainter {
        decisions: &prefix,
        choice_rounds: Vec::new(),
    };
    let mut here = judge(strategy.as_mut(), &mut painter, config, bound, String::new)?;
    let choices = painter.choice_rounds;
    for r in &mut here.records {
        let bits = script_bits(&prefix, &choices, r.rounds);
        r.painter = PainterSpec::Scripted(bits).to_string();
    }
    // siblings: flip each default Red past the prefix to Blue
    let children: Vec<Vec<bool>> = (prefix.len()..choices.len())
        .map(|j| {
            let mut c = prefix.clone();
            c.resize(j, false);
            c.push(true);
            c
        })
        .collect();
    let rest = children
        .into_par_iter()
        .map(|c| explore(factory, config, bound, c))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(here.merge(rest))
}

/// Plays every legal Painter reply sequence against fresh strategies from `factory`.
pub fn exhaustive_verify(factory: &BuilderFactory<'_>, bound: usize) -> Result<VerifyReport, VerifyError> {
    if bound > MAX_EXHAUSTIVE_BOUND {
        return Err(VerifyError::Infeasible(bound));
    }
    let probe = factory();
    let config = probe.config().with_budget(4 * bound + 100);
    let tally = explore(factory, &config, bound, Vec::new())?;
    Ok(tally.into_report(probe.as_ref(), Mode::Exhaustive, bound))
}

/// Plays each deterministic painter once and each random painter `trials`
/// times with seeds `seed, seed + 1, ...`.
pub fn randomized_verify(
    factory: &BuilderFactory<'_>,
    painters: &[PainterSpec],
    bound: usize,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    if painters.is_empty() {
        return Err(VerifyError::NoPainters);
    }
    let probe = factory();
    let config = probe.config().with_budget(4 * bound + 100);
    let games: Vec<PainterSpec> = painters
        .iter()
        .flat_map(|p| {
            if p.is_random() {
                (0..trials as u64).map(|i| p.reseeded(seed.wrapping_add(i))).collect()
            } else {
                vec![p.clone()]
            }
        })
        .collect();
    let tally = games
        .par_iter()
        .map(|spec| {
            let mut strategy = factory();
            let mut painter = spec.build();
            judge(strategy.as_mut(), painter.as_mut(), &config, bound, || spec.to_string())
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(tally.into_report(probe.as_ref(), Mode::Randomized { trials, seed }, bound))
}

/// Writes each recorded witness to `dir` and fills in its path.
pub fn write_witnesses(report: &mut VerifyReport, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (i, f) in report.invariant_failures.iter_mut().enumerate() {
        let path = dir.join(format!("{}-k{}-n{}-witness-{i}.json", report.builder, report.k, report.n));
        std::fs::write(&path, f.witness.to_json())?;
        f.witness_path = Some(path.display().to_string());
    }
    Ok(())
}

pub const CSV_HEADER: &str = "builder,k,n,mode,max_rounds,bound,leaves,status";

fn csv_row(r: &VerifyReport, out: &mut String) {
    let status = match r.status {
        VerifyStatus::Pass => "pass",
        VerifyStatus::Fail => "fail",
    };
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{status}",
        r.builder,
        r.k,
        r.n,
        r.mode.label(),
        r.max_rounds_observed,
        r.bound,
        r.leaves_explored
    );
}

pub fn emit_report(report: &VerifyReport, format: Format) -> Vec<u8> {
    emit_reports(std::slice::from_ref(report), format)
}

/// JSON: one object per line. CSV: a single header, then one row per report.
pub fn emit_reports(reports: &[VerifyReport], format: Format) -> Vec<u8> {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in reports {
                out.push_str(&serde_json::to_string(r).expect("reports always serialize"));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in reports {
                csv_row(r, &mut out);
            }
        }
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{replay, ReplayOracle};
    use crate::strategy::p4::{p4_bound, P4Builder};
    use crate::strategy::pk::{pk_bound, PkBuilder};

    fn p4(n: usize) -> impl Fn() -> Box<dyn Strategy> + Sync + Clone {
        move || Box::new(P4Builder::new(n).unwrap()) as Box<dyn Strategy>
    }

    /// Leaf count by a separate walk: step a replaying oracle and clone the
    /// game state at every choice.
    fn count_leaves(factory: impl Fn() -> Box<dyn Strategy> + Clone, config: &GameConfig) -> u64 {
        use crate::game::{legal_colors, play_round, BuilderOracle, Endpoint};
        fn walk<F: Fn() -> Box<dyn Strategy> + Clone>(mut oracle: ReplayOracle<F>, mut state: GameState) -> u64 {
            loop {
                if state.status != Status::InProgress {
                    return 1;
                }
                let p = oracle.next_move(&state).unwrap().expect("strategy stalled");
                let mut pick = |e: Endpoint| match e {
                    Endpoint::At(x) => x,
                    Endpoint::Fresh => state.board.allocate_free_vertex(),
                };
                let (u, v) = (pick(p.u), pick(p.v));
                let legal = legal_colors(&state, u, v).unwrap();
                let colors: Vec<Color> = match state.board.color(u, v) {
                    Some(c) => vec![c],
                    None => legal.iter().collect(),
                };
                if colors.len() == 2 {
                    return colors
                        .into_iter()
                        .map(|c| {
                            let (mut o, mut s) = (oracle.clone(), state.clone());
                            play_round(&mut s, u, v, c, p.forced, p.note.clone()).unwrap();
                            o.on_painter_reply(u, v, c);
                            walk(o, s)
                        })
                        .sum();
                }
                play_round(&mut state, u, v, colors[0], p.forced, p.note).unwrap();
                oracle.on_painter_reply(u, v, colors[0]);
            }
        }
        walk(ReplayOracle::new(factory), GameState::new(config.clone()).unwrap())
    }

    #[test]
    fn exhaustive_p4_n10_passes_and_counts_every_leaf() {
        let r = exhaustive_verify(&p4(10), p4_bound(10)).unwrap();
        assert_eq!(r.status, VerifyStatus::Pass, "{:?}", r.invariant_failures);
        assert!(r.max_rounds_observed <= 13);
        assert!(r.leaves_explored <= 1 << 13);
        let config = P4Builder::new(10).unwrap().config();
        assert_eq!(count_leaves(p4(10), &config), r.leaves_explored);
    }

    #[test]
    fn lowered_bound_fails_with_replayable_witness() {
        let full = exhaustive_verify(&p4(10), 13).unwrap();
        let r = exhaustive_verify(&p4(10), 12).unwrap();
        assert_eq!(r.status == VerifyStatus::Fail, full.max_rounds_observed == 13);
        if let Some(f) = r.invariant_failures.first() {
            assert_eq!(f.rounds, 13);
            replay(&f.witness).unwrap();
            let spec: PainterSpec = f.painter.parse().unwrap();
            let mut painter = spec.build();
            let mut b = P4Builder::new(10).unwrap();
            let config = b.config();
            let played = play_strategy(&mut b, painter.as_mut(), &config).unwrap();
            assert_eq!(played.transcript.moves, f.witness.moves);
        }
    }

    #[test]
    fn guard_and_trial_errors() {
        assert!(matches!(exhaustive_verify(&p4(30), 41), Err(VerifyError::Infeasible(41))));
        let specs = ["random:1".parse().unwrap()];
        assert!(matches!(randomized_verify(&p4(20), &specs, 27, 0, 1), Err(VerifyError::NoTrials)));
    }

    #[test]
    fn randomized_pk_passes() {
        let f = || Box::new(PkBuilder::new(5, 30).unwrap()) as Box<dyn Strategy>;
        let specs: Vec<PainterSpec> = ["red-greedy", "all-blue", "heuristic", "random:7"].iter().map(|s| s.parse().unwrap()).collect();
        let r = randomized_verify(&f, &specs, pk_bound(5, 30), 20, 100).unwrap();
        assert_eq!(r.status, VerifyStatus::Pass, "{:?}", r.invariant_failures);
        assert_eq!(r.leaves_explored, 23);
        assert!(r.max_rounds_observed <= 110);
    }

    #[test]
    fn csv_and_json_rendering() {
        let r = exhaustive_verify(&p4(10), 13).unwrap();
        let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("p4,4,10,exhaustive,"));
        let json: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(json["status"], "pass");
        assert_eq!(json["mode"], "exhaustive");
    }
}
