//! `ramsey-forge`: play, verify, solve and replay online Ramsey games on paths.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{debug, info};

use ramsey_core::game::{play_strategy, replay, Status, Strategy, Transcript};
use ramsey_core::painters::{HeuristicParams, PainterSpec};
use ramsey_core::solver::{solve, SolveValue, SolverConfig};
use ramsey_core::strategy::p4::P4Builder;
use ramsey_core::strategy::pk::PkBuilder;
use ramsey_core::verify::{emit_reports, exhaustive_verify, randomized_verify, write_witnesses, Format, VerifyStatus, MAX_EXHAUSTIVE_BOUND};

const EXIT_ERROR: u8 = 1;
const EXIT_BOUND: u8 = 2;
const EXIT_BRACKET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_INFEASIBLE: u8 = 65;
const EXIT_BAD_INPUT: u8 = 66;

#[derive(Parser, Debug)]
#[command(name = "ramsey-forge", version, about = "Builder strategies for online size Ramsey games on paths")]
struct Cli {
    /// More log output (-v info, -vv debug); RAMSEY_FORGE_LOG takes precedence.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play one game and report its outcome.
    Play(PlayArgs),
    /// Check a builder against all or many painters for a range of n.
    Verify(VerifyArgs),
    /// Compute the online size Ramsey number for tiny k and n.
    Solve(SolveArgs),
    /// Re-validate a transcript move by move.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuilderKind {
    Pk,
    P4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PainterKind {
    AllBlue,
    RedGreedy,
    Random,
    Heuristic,
    Interactive,
    Script,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeKind {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatKind {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct PlayArgs {
    #[arg(long, value_enum)]
    builder: BuilderKind,
    #[arg(long, value_enum, default_value = "red-greedy")]
    painter: PainterKind,
    #[arg(long)]
    n: usize,
    /// Red path length; 4 for p4, default 5 for pk.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Painter replies by round for `--painter script`, e.g. 0110 (1 = blue when legal).
    #[arg(long)]
    script: Option<String>,
    /// Transcript file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    builder: BuilderKind,
    #[arg(long, value_enum)]
    mode: ModeKind,
    /// Inclusive range such as 10..16.
    #[arg(long, value_parser = parse_range)]
    n_range: (usize, usize),
    #[arg(long)]
    k: Option<usize>,
    /// Games per random painter.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatKind,
    /// Directory for the report and failure witnesses.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Largest number of rounds searched.
    #[arg(long)]
    budget: Option<usize>,
    /// Stop after expanding this many positions.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Result record as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ReplayArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// An error with the exit code it maps to.
#[derive(Debug)]
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl Into<String>) -> Fail {
        Fail(EXIT_USAGE, msg.into())
    }
}

type Outcome = Result<u8, Fail>;

fn make_builder(kind: BuilderKind, k: Option<usize>, n: usize) -> Result<Box<dyn Strategy>, Fail> {
    match kind {
        BuilderKind::P4 => {
            if k.is_some_and(|k| k != 4) {
                return Err(Fail::usage("the p4 builder plays with k = 4"));
            }
            P4Builder::new(n).map(|b| Box::new(b) as Box<dyn Strategy>).map_err(|e| Fail::usage(e.to_string()))
        }
        BuilderKind::Pk => PkBuilder::new(k.unwrap_or(5), n)
            .map(|b| Box::new(b) as Box<dyn Strategy>)
            .map_err(|e| Fail::usage(e.to_string())),
    }
}

fn painter_spec(args: &PlayArgs) -> Result<PainterSpec, Fail> {
    if args.script.is_some() && !matches!(args.painter, PainterKind::Script) {
        return Err(Fail::usage("--script needs --painter script"));
    }
    Ok(match args.painter {
        PainterKind::AllBlue => PainterSpec::AllBlue,
        PainterKind::RedGreedy => PainterSpec::RedGreedy,
        PainterKind::Random => PainterSpec::UniformRandom(args.seed),
        PainterKind::Heuristic => PainterSpec::Heuristic(HeuristicParams::default()),
        PainterKind::Interactive => PainterSpec::Interactive,
        PainterKind::Script => {
            let bits = args.script.as_deref().ok_or_else(|| Fail::usage("--painter script needs --script"))?;
            format!("scripted:{bits}").parse().map_err(|_| Fail::usage(format!("--script takes 0/1 digits, got {bits:?}")))?
        }
    })
}

fn cmd_play(args: PlayArgs) -> Outcome {
    let mut builder = make_builder(args.builder, args.k, args.n)?;
    let spec = painter_spec(&args)?;
    let config = builder.config();
    let bound = builder.bound();
    info!("play {} n={} painter={spec} bound={bound}", builder.name(), args.n);
    let mut painter = spec.build();
    let played = play_strategy(builder.as_mut(), painter.as_mut(), &config).map_err(|e| Fail(EXIT_ERROR, e.to_string()))?;
    if let Some(path) = &args.out {
        fs::write(path, played.transcript.to_json()).map_err(|e| Fail(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    }
    let rounds = played.transcript.rounds;
    println!("outcome={} rounds={rounds} bound={bound}", played.state.status);
    let mut problems: Vec<String> = played.failure.iter().map(|f| f.to_string()).collect();
    problems.extend(builder.audit(&played.state));
    for p in &problems {
        eprintln!("problem: {p}");
    }
    if played.state.status != Status::BlueWin || !problems.is_empty() {
        return Ok(EXIT_ERROR);
    }
    Ok(if rounds > bound { EXIT_BOUND } else { 0 })
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let (lo, hi) = args.n_range;
    // validate every n before running anything
    let mut bounds = Vec::new();
    for n in lo..=hi {
        let b = make_builder(args.builder, args.k, n)?;
        if matches!(args.mode, ModeKind::Exhaustive) && b.bound() > MAX_EXHAUSTIVE_BOUND {
            return Err(Fail(
                EXIT_INFEASIBLE,
                format!("exhaustive verification at n={n} needs bound {} > {MAX_EXHAUSTIVE_BOUND}", b.bound()),
            ));
        }
        bounds.push((n, b.bound()));
    }
    if args.trials == 0 {
        return Err(Fail::usage("--trials must be at least 1"));
    }
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(Fail::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Fail(EXIT_ERROR, e.to_string()))?;
    }
    let painters: Vec<PainterSpec> = ["all-blue", "red-greedy", "heuristic", "random:0"]
        .iter()
        .map(|s| s.parse().expect("built-in painter specs parse"))
        .collect();
    let mut reports = Vec::new();
    for (n, bound) in bounds {
        let (kind, k) = (args.builder, args.k);
        let factory = move || make_builder(kind, k, n).expect("validated above");
        let report = match args.mode {
            ModeKind::Exhaustive => exhaustive_verify(&factory, bound),
            ModeKind::Randomized => randomized_verify(&factory, &painters, bound, args.trials, args.seed),
        };
        let mut report = report.map_err(|e| Fail(EXIT_ERROR, e.to_string()))?;
        debug!("n={n}: {} leaves, max {} rounds", report.leaves_explored, report.max_rounds_observed);
        if let Some(dir) = &args.out {
            write_witnesses(&mut report, dir).map_err(|e| Fail(EXIT_ERROR, format!("{}: {e}", dir.display())))?;
        }
        reports.push(report);
    }
    let format = match args.format {
        FormatKind::Json => Format::Json,
        FormatKind::Csv => Format::Csv,
    };
    let bytes = emit_reports(&reports, format);
    print!("{}", String::from_utf8_lossy(&bytes));
    if let Some(dir) = &args.out {
        let name = match format {
            Format::Json => "report.jsonl",
            Format::Csv => "report.csv",
        };
        fs::write(dir.join(name), &bytes).map_err(|e| Fail(EXIT_ERROR, format!("{}: {e}", dir.display())))?;
    }
    let all_pass = reports.iter().all(|r| r.status == VerifyStatus::Pass);
    Ok(if all_pass { 0 } else { EXIT_BOUND })
}

fn cmd_solve(args: SolveArgs) -> Outcome {
    let mut cfg = SolverConfig::new(args.k, args.n);
    if let Some(b) = args.budget {
        cfg = cfg.with_budget(b);
    }
    cfg.node_budget = args.max_nodes;
    let result = solve(&cfg).map_err(|e| Fail::usage(e.to_string()))?;
    if let Some(path) = &args.out {
        let json = serde_json::to_string(&result).expect("results always serialize");
        fs::write(path, json + "\n").map_err(|e| Fail(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    }
    info!("{} positions expanded, {} memo hits, {} ms", result.nodes_expanded, result.memo_hits, result.wall_time_ms);
    Ok(match result.value {
        SolveValue::Exact(v) => {
            println!("{v}");
            0
        }
        SolveValue::Bracket { lower, upper } => {
            println!("bracket [{lower}, {upper}]");
            EXIT_BRACKET
        }
    })
}

fn cmd_replay(args: ReplayArgs) -> Outcome {
    let text = fs::read_to_string(&args.input).map_err(|e| Fail(EXIT_BAD_INPUT, format!("{}: {e}", args.input.display())))?;
    let t = Transcript::from_json(&text).map_err(|e| Fail(EXIT_BAD_INPUT, format!("{}: {e}", args.input.display())))?;
    let state = replay(&t).map_err(|e| Fail(EXIT_MISMATCH, e.to_string()))?;
    for m in &t.moves {
        let mut flags = String::new();
        if m.forced {
            flags.push_str(" forced");
        }
        if m.reselect {
            flags.push_str(" reselect");
        }
        println!("{:>4}  {}-{}  {}{flags}  {}", m.round, m.u, m.v, m.color, m.note);
    }
    println!("outcome={} rounds={}", state.status, t.rounds);
    Ok(0)
}

fn init_logging(verbose: u8) {
    let default = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RAMSEY_FORGE_LOG", default)).init();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    init_logging(cli.verbose);
    let result = match cli.command {
        Command::Play(a) => cmd_play(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
