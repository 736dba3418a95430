//! Rules of the path games, the round driver, and the Builder/Painter interfaces.

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{BoardError, Color, ColoredGraph, Edge, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Builder wins on a blue `P_n`, Painter loses on a red `P_k`.
    Standard,
    /// Painter may never create a red `P_k`; Builder wins on a blue `P_n`.
    RestrictedRed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    BlueWin,
    RedWin,
    BudgetExceeded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::InProgress => "in_progress",
            Status::BlueWin => "blue_win",
            Status::RedWin => "red_win",
            Status::BudgetExceeded => "budget_exceeded",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Builder,
    Painter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub k: usize,
    pub n: usize,
    pub variant: Variant,
    pub initial_edges: Vec<Edge>,
    pub allow_reselect: bool,
    pub round_budget: usize,
}

impl GameConfig {
    /// RestrictedRed game on an empty board with an effectively unlimited budget.
    pub fn restricted(k: usize, n: usize) -> Self {
        GameConfig {
            k,
            n,
            variant: Variant::RestrictedRed,
            initial_edges: Vec::new(),
            allow_reselect: false,
            round_budget: usize::MAX,
        }
    }

    pub fn standard(k: usize, n: usize) -> Self {
        GameConfig {
            variant: Variant::Standard,
            ..GameConfig::restricted(k, n)
        }
    }

    pub fn with_budget(mut self, round_budget: usize) -> Self {
        self.round_budget = round_budget;
        self
    }

    pub fn with_reselect(mut self, allow: bool) -> Self {
        self.allow_reselect = allow;
        self
    }

    pub fn initial_board(&self) -> Result<ColoredGraph, BoardError> {
        let mut g = ColoredGraph::new();
        for e in &self.initial_edges {
            g.add_edge(e.u, e.v, e.color)?;
        }
        Ok(g)
    }
}

/// The set of colors Painter may use on a proposed edge. Never empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegalColors {
    pub red: bool,
    pub blue: bool,
}

impl LegalColors {
    pub const BOTH: LegalColors = LegalColors { red: true, blue: true };

    pub fn only(c: Color) -> Self {
        LegalColors {
            red: c == Color::Red,
            blue: c == Color::Blue,
        }
    }

    pub fn contains(self, c: Color) -> bool {
        match c {
            Color::Red => self.red,
            Color::Blue => self.blue,
        }
    }

    pub fn is_choice(self) -> bool {
        self.red && self.blue
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        Color::BOTH.into_iter().filter(move |&c| self.contains(c))
    }
}

impl fmt::Display for LegalColors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .iter()
            .map(|c| if c == Color::Red { "r" } else { "b" })
            .collect();
        write!(f, "[{}]", names.join(","))
    }
}

#[derive(Debug, Error)]
pub enum PainterError {
    #[error("painter aborted: {0}")]
    Aborted(String),
    #[error("painter i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("illegal move by {offender:?}: {reason}")]
    IllegalMove { offender: Player, reason: String },
    #[error("game is over ({0})")]
    GameOver(Status),
    #[error("round budget exhausted")]
    BudgetExceeded,
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Painter(#[from] PainterError),
    #[error("builder oracle: {0}")]
    Oracle(#[from] StrategyError),
}

impl GameError {
    fn builder(reason: impl Into<String>) -> Self {
        GameError::IllegalMove {
            offender: Player::Builder,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GameState {
    pub config: GameConfig,
    pub board: ColoredGraph,
    pub round: usize,
    pub status: Status,
}

impl GameState {
    pub fn new(config: GameConfig) -> Result<Self, GameError> {
        let board = config.initial_board()?;
        let status = if board.has_path(Color::Blue, config.n)? {
            Status::BlueWin
        } else if config.variant == Variant::Standard && board.has_path(Color::Red, config.k)? {
            Status::RedWin
        } else {
            Status::InProgress
        };
        Ok(GameState {
            config,
            board,
            round: 0,
            status,
        })
    }
}

/// True iff coloring the uncolored edge `uv` red would close a red path on `k` vertices.
pub fn forces_blue(board: &ColoredGraph, k: usize, u: VertexId, v: VertexId) -> bool {
    board.longest_path_through_capped(Color::Red, u, v, k) >= k
}

pub fn legal_colors(state: &GameState, u: VertexId, v: VertexId) -> Result<LegalColors, GameError> {
    if state.status != Status::InProgress {
        return Err(GameError::GameOver(state.status));
    }
    if u == v {
        return Err(GameError::builder(format!("self-loop at {u}")));
    }
    if let Some(c) = state.board.color(u, v) {
        if state.config.allow_reselect {
            return Ok(LegalColors::only(c));
        }
        return Err(GameError::builder(format!("edge {u}-{v} is already colored")));
    }
    match state.config.variant {
        Variant::Standard => Ok(LegalColors::BOTH),
        Variant::RestrictedRed => {
            if forces_blue(&state.board, state.config.k, u, v) {
                Ok(LegalColors::only(Color::Blue))
            } else {
                Ok(LegalColors::BOTH)
            }
        }
    }
}

/// Whether `uw` is forced blue, judged by the RestrictedRed rule regardless of variant.
pub fn is_forcing(state: &GameState, u: VertexId, w: VertexId) -> Result<bool, GameError> {
    if state.status != Status::InProgress {
        return Err(GameError::GameOver(state.status));
    }
    if u == w || state.board.color(u, w).is_some() {
        return Err(GameError::builder(format!("edge {u}-{w} is not an uncolored pair")));
    }
    Ok(forces_blue(&state.board, state.config.k, u, w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    #[serde(rename = "r")]
    pub round: usize,
    pub u: VertexId,
    pub v: VertexId,
    #[serde(rename = "c")]
    pub color: Color,
    pub forced: bool,
    pub reselect: bool,
    pub note: Cow<'static, str>,
}

/// Applies one round. Forced claims are validated against the pre-move board.
pub fn play_round(
    state: &mut GameState,
    u: VertexId,
    v: VertexId,
    color: Color,
    forced: bool,
    note: Cow<'static, str>,
) -> Result<MoveRecord, GameError> {
    if state.status != Status::InProgress {
        return Err(GameError::GameOver(state.status));
    }
    if state.round >= state.config.round_budget {
        state.status = Status::BudgetExceeded;
        return Err(GameError::BudgetExceeded);
    }
    let legal = legal_colors(state, u, v)?;
    if !legal.contains(color) {
        return Err(GameError::IllegalMove {
            offender: Player::Painter,
            reason: format!("{color} on {u}-{v} where legal={legal}"),
        });
    }
    let reselect = state.board.color(u, v).is_some();
    if forced && !reselect && !forces_blue(&state.board, state.config.k, u, v) {
        return Err(GameError::builder(format!("{u}-{v} claimed forced but red is legal ({note})")));
    }
    let mut red_win = false;
    // no blue P_n exists yet, so a new one must run through uv
    let blue_win = color == Color::Blue
        && !reselect
        && state.board.component_size(Color::Blue, u) + state.board.component_size(Color::Blue, v) >= state.config.n
        && state.board.longest_path_through_capped(Color::Blue, u, v, state.config.n) >= state.config.n;
    if !reselect {
        if color == Color::Red && state.config.variant == Variant::Standard {
            red_win = forces_blue(&state.board, state.config.k, u, v);
        }
        state.board.add_edge(u, v, color)?;
    }
    state.round += 1;
    if red_win {
        state.status = Status::RedWin;
    } else if blue_win {
        state.status = Status::BlueWin;
    }
    let e = Edge::new(u, v, color);
    Ok(MoveRecord {
        round: state.round,
        u: e.u,
        v: e.v,
        color,
        forced,
        reselect,
        note,
    })
}

pub trait PainterPolicy {
    fn choose_color(
        &mut self,
        state: &GameState,
        u: VertexId,
        v: VertexId,
        legal: LegalColors,
    ) -> Result<Color, PainterError>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("{u}-{v} is not forced blue ({note})")]
    NotForced {
        u: VertexId,
        v: VertexId,
        note: Cow<'static, str>,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{what}: {value} exceeds bound {bound}")]
    Bound {
        what: Cow<'static, str>,
        value: usize,
        bound: usize,
    },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("builder stopped before the game ended")]
    Stalled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    At(VertexId),
    /// Any vertex never touched so far.
    Fresh,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposal {
    pub u: Endpoint,
    pub v: Endpoint,
    pub forced: bool,
    pub note: Cow<'static, str>,
}

/// Move-at-a-time Builder interface.
pub trait BuilderOracle {
    /// `Ok(None)` means the Builder has nothing left to play.
    fn next_move(&mut self, state: &GameState) -> Result<Option<Proposal>, StrategyError>;
    fn on_painter_reply(&mut self, u: VertexId, v: VertexId, color: Color);
}

/// Why a sequential strategy stopped early.
#[derive(Debug)]
pub enum Halt {
    /// The game reached a terminal status.
    Finished,
    /// Replay reached the end of the known history; this is the next move.
    Yield(Proposal),
    Game(GameError),
    Strategy(StrategyError),
}

impl From<StrategyError> for Halt {
    fn from(e: StrategyError) -> Self {
        Halt::Strategy(e)
    }
}

/// The view a sequential strategy has of the game it plays.
pub trait Arena {
    fn board(&self) -> &ColoredGraph;
    fn k(&self) -> usize;
    /// Rounds played so far.
    fn round(&self) -> usize;
    fn fresh(&mut self) -> VertexId;
    fn play(&mut self, u: VertexId, v: VertexId, forced: bool, note: &'static str) -> Result<Color, Halt>;

    fn select(&mut self, u: VertexId, v: VertexId, note: &'static str) -> Result<Color, Halt> {
        self.play(u, v, false, note)
    }

    /// Selects an edge the strategy claims is forced blue; the claim is checked first.
    fn force(&mut self, u: VertexId, v: VertexId, note: &'static str) -> Result<(), Halt> {
        if u == v || self.board().color(u, v).is_some() || !forces_blue(self.board(), self.k(), u, v) {
            return Err(Halt::Strategy(StrategyError::NotForced {
                u,
                v,
                note: Cow::Borrowed(note),
            }));
        }
        match self.play(u, v, true, note)? {
            Color::Blue => Ok(()),
            Color::Red => Err(Halt::Strategy(StrategyError::Invariant(format!(
                "forced edge {u}-{v} came back red"
            )))),
        }
    }
}

/// A Builder strategy written as straight-line code against an [`Arena`].
pub trait Strategy: Send {
    fn name(&self) -> &'static str;
    /// Game parameters this strategy is built for.
    fn config(&self) -> GameConfig;
    /// The round bound the strategy claims.
    fn bound(&self) -> usize;
    fn play(&mut self, arena: &mut dyn Arena) -> Result<(), Halt>;
    /// Strategy-specific checks on the finished game; each entry is a violation.
    fn audit(&self, _state: &GameState) -> Vec<String> {
        Vec::new()
    }
    /// Named tallies from the last game, summed by the verification harness.
    fn counters(&self) -> Vec<(&'static str, usize)> {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub k: usize,
    pub n: usize,
    pub variant: Variant,
    pub allow_reselect: bool,
    pub round_budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: ConfigEcho,
    pub initial_edges: Vec<(VertexId, VertexId, Color)>,
    pub moves: Vec<MoveRecord>,
    pub outcome: Status,
    pub rounds: usize,
}

impl Transcript {
    pub fn new(config: &GameConfig, moves: Vec<MoveRecord>, outcome: Status) -> Self {
        Transcript {
            config: ConfigEcho {
                k: config.k,
                n: config.n,
                variant: config.variant,
                allow_reselect: config.allow_reselect,
                round_budget: config.round_budget,
            },
            initial_edges: config.initial_edges.iter().map(|e| (e.u, e.v, e.color)).collect(),
            rounds: moves.len(),
            moves,
            outcome,
        }
    }

    pub fn game_config(&self) -> GameConfig {
        GameConfig {
            k: self.config.k,
            n: self.config.n,
            variant: self.config.variant,
            initial_edges: self
                .initial_edges
                .iter()
                .map(|&(u, v, c)| Edge::new(u, v, c))
                .collect(),
            allow_reselect: self.config.allow_reselect,
            round_budget: self.config.round_budget,
        }
    }

    /// Single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("transcripts always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Sequential driver: one real game, the strategy talks to the painter directly.
pub struct Game<'p> {
    state: GameState,
    moves: Vec<MoveRecord>,
    painter: &'p mut dyn PainterPolicy,
}

impl<'p> Game<'p> {
    pub fn new(config: GameConfig, painter: &'p mut dyn PainterPolicy) -> Result<Self, GameError> {
        Ok(Game {
            state: GameState::new(config)?,
            moves: Vec::new(),
            painter,
        })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn into_parts(self) -> (GameState, Vec<MoveRecord>) {
        (self.state, self.moves)
    }
}

impl Arena for Game<'_> {
    fn board(&self) -> &ColoredGraph {
        &self.state.board
    }

    fn k(&self) -> usize {
        self.state.config.k
    }

    fn round(&self) -> usize {
        self.state.round
    }

    fn fresh(&mut self) -> VertexId {
        self.state.board.allocate_free_vertex()
    }

    fn play(&mut self, u: VertexId, v: VertexId, forced: bool, note: &'static str) -> Result<Color, Halt> {
        if self.state.status != Status::InProgress {
            return Err(Halt::Finished);
        }
        if self.state.round >= self.state.config.round_budget {
            self.state.status = Status::BudgetExceeded;
            return Err(Halt::Finished);
        }
        let legal = legal_colors(&self.state, u, v).map_err(Halt::Game)?;
        let color = match self.state.board.color(u, v) {
            Some(c) => c,
            None => self
                .painter
                .choose_color(&self.state, u, v, legal)
                .map_err(|e| Halt::Game(e.into()))?,
        };
        let rec = play_round(&mut self.state, u, v, color, forced, Cow::Borrowed(note)).map_err(Halt::Game)?;
        self.moves.push(rec);
        if self.state.status != Status::InProgress {
            return Err(Halt::Finished);
        }
        Ok(color)
    }
}

/// Why a driven game did not end cleanly.
#[derive(Debug)]
pub enum Failure {
    Game(GameError),
    Strategy(StrategyError),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Game(e) => write!(f, "{e}"),
            Failure::Strategy(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug)]
pub struct Played {
    pub transcript: Transcript,
    pub state: GameState,
    pub failure: Option<Failure>,
}

/// Runs `strategy` against `painter` in one pass.
pub fn play_strategy(
    strategy: &mut dyn Strategy,
    painter: &mut dyn PainterPolicy,
    config: &GameConfig,
) -> Result<Played, GameError> {
    let mut game = Game::new(config.clone(), painter)?;
    let result = if game.state.status == Status::InProgress {
        strategy.play(&mut game)
    } else {
        Err(Halt::Finished)
    };
    let (state, moves) = game.into_parts();
    let failure = match result {
        Ok(()) if state.status == Status::InProgress => Some(Failure::Strategy(StrategyError::Stalled)),
        Ok(()) | Err(Halt::Finished) => None,
        Err(Halt::Yield(_)) => Some(Failure::Strategy(StrategyError::Invariant(
            "strategy yielded inside a live game".into(),
        ))),
        Err(Halt::Game(e)) => Some(Failure::Game(e)),
        Err(Halt::Strategy(e)) => Some(Failure::Strategy(e)),
    };
    let transcript = Transcript::new(config, moves, state.status);
    Ok(Played {
        transcript,
        state,
        failure,
    })
}

/// Runs a move-at-a-time Builder against a Painter until a terminal status.
pub fn run_game(
    builder: &mut dyn BuilderOracle,
    painter: &mut dyn PainterPolicy,
    config: &GameConfig,
) -> Result<(Transcript, GameState), GameError> {
    let mut state = GameState::new(config.clone())?;
    let mut moves = Vec::new();
    while state.status == Status::InProgress {
        if state.round >= state.config.round_budget {
            state.status = Status::BudgetExceeded;
            break;
        }
        let p = builder.next_move(&state)?.ok_or(GameError::Oracle(StrategyError::Stalled))?;
        let (u, v) = resolve(&mut state.board, p.u, p.v);
        let legal = legal_colors(&state, u, v)?;
        let color = match state.board.color(u, v) {
            Some(c) => c,
            None => painter.choose_color(&state, u, v, legal)?,
        };
        let rec = play_round(&mut state, u, v, color, p.forced, p.note)?;
        builder.on_painter_reply(u, v, color);
        moves.push(rec);
    }
    let t = Transcript::new(config, moves, state.status);
    Ok((t, state))
}

fn resolve(board: &mut ColoredGraph, u: Endpoint, v: Endpoint) -> (VertexId, VertexId) {
    let mut pick = |e: Endpoint| match e {
        Endpoint::At(x) => x,
        Endpoint::Fresh => board.allocate_free_vertex(),
    };
    let a = pick(u);
    let b = pick(v);
    (a, b)
}

/// Adapts a sequential [`Strategy`] to [`BuilderOracle`] by re-running it on the reply history.
pub struct ReplayOracle<F> {
    factory: F,
    replies: Vec<Color>,
}

impl<F: Fn() -> Box<dyn Strategy>> ReplayOracle<F> {
    pub fn new(factory: F) -> Self {
        ReplayOracle {
            factory,
            replies: Vec::new(),
        }
    }
}

impl<F> Clone for ReplayOracle<F>
where
    F: Clone,
{
    fn clone(&self) -> Self {
        ReplayOracle {
            factory: self.factory.clone(),
            replies: self.replies.clone(),
        }
    }
}

struct ShadowArena<'a> {
    board: ColoredGraph,
    k: usize,
    replies: &'a [Color],
    cursor: usize,
}

impl Arena for ShadowArena<'_> {
    fn board(&self) -> &ColoredGraph {
        &self.board
    }

    fn k(&self) -> usize {
        self.k
    }

    fn round(&self) -> usize {
        self.cursor
    }

    fn fresh(&mut self) -> VertexId {
        self.board.allocate_free_vertex()
    }

    fn play(&mut self, u: VertexId, v: VertexId, forced: bool, note: &'static str) -> Result<Color, Halt> {
        let Some(&color) = self.replies.get(self.cursor) else {
            return Err(Halt::Yield(Proposal {
                u: Endpoint::At(u),
                v: Endpoint::At(v),
                forced,
                note: Cow::Borrowed(note),
            }));
        };
        self.cursor += 1;
        if self.board.color(u, v).is_none() {
            self.board.add_edge(u, v, color).map_err(|e| Halt::Game(e.into()))?;
        }
        Ok(color)
    }
}

impl<F: Fn() -> Box<dyn Strategy>> BuilderOracle for ReplayOracle<F> {
    fn next_move(&mut self, state: &GameState) -> Result<Option<Proposal>, StrategyError> {
        let board = state
            .config
            .initial_board()
            .map_err(|e| StrategyError::Precondition(e.to_string()))?;
        let mut shadow = ShadowArena {
            board,
            k: state.config.k,
            replies: &self.replies,
            cursor: 0,
        };
        let mut strategy = (self.factory)();
        match strategy.play(&mut shadow) {
            Err(Halt::Yield(p)) => Ok(Some(p)),
            Ok(()) | Err(Halt::Finished) => Ok(None),
            Err(Halt::Strategy(e)) => Err(e),
            Err(Halt::Game(e)) => Err(StrategyError::Invariant(e.to_string())),
        }
    }

    fn on_painter_reply(&mut self, _u: VertexId, _v: VertexId, color: Color) {
        self.replies.push(color);
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("move {index} carries round {found}, expected {expected}")]
    RoundIndex { index: usize, expected: usize, found: usize },
    #[error("round {round}: endpoints must satisfy u < v")]
    Unordered { round: usize },
    #[error("round {round}: reselect flag disagrees with the board")]
    Reselect { round: usize },
    #[error("round {round}: {source}")]
    Move { round: usize, source: GameError },
    #[error("recorded outcome {recorded} but replay ends with {actual}")]
    Outcome { recorded: Status, actual: Status },
    #[error("recorded {recorded} rounds but transcript has {actual} moves")]
    Rounds { recorded: usize, actual: usize },
    #[error("initial board: {0}")]
    Initial(#[from] GameError),
}

/// Re-validates every move of a transcript and returns the final state.
pub fn replay(t: &Transcript) -> Result<GameState, ReplayError> {
    let mut state = GameState::new(t.game_config())?;
    for (i, m) in t.moves.iter().enumerate() {
        if m.round != i + 1 {
            return Err(ReplayError::RoundIndex {
                index: i,
                expected: i + 1,
                found: m.round,
            });
        }
        if m.u >= m.v {
            return Err(ReplayError::Unordered { round: m.round });
        }
        if state.board.color(m.u, m.v).is_some() != m.reselect {
            return Err(ReplayError::Reselect { round: m.round });
        }
        play_round(&mut state, m.u, m.v, m.color, m.forced, m.note.clone())
            .map_err(|source| ReplayError::Move { round: m.round, source })?;
    }
    if t.rounds != t.moves.len() {
        return Err(ReplayError::Rounds {
            recorded: t.rounds,
            actual: t.moves.len(),
        });
    }
    if state.status != t.outcome {
        return Err(ReplayError::Outcome {
            recorded: t.outcome,
            actual: state.status,
        });
    }
    Ok(state)
}
