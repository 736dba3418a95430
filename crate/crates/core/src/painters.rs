//! Painter policies, from trivial to adversarial, plus a line-protocol human Painter.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Color, VertexId};
use crate::game::{GameState, LegalColors, PainterError, PainterPolicy};

use Color::{Blue, Red};

fn prefer(c: Color, legal: LegalColors) -> Color {
    if legal.contains(c) {
        c
    } else {
        c.other()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AllBlue;

impl PainterPolicy for AllBlue {
    fn choose_color(&mut self, _: &GameState, _: VertexId, _: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        Ok(prefer(Blue, legal))
    }
}

/// Red whenever Red is legal.
#[derive(Clone, Copy, Debug, Default)]
pub struct RedGreedy;

impl PainterPolicy for RedGreedy {
    fn choose_color(&mut self, _: &GameState, _: VertexId, _: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        Ok(prefer(Red, legal))
    }
}

#[derive(Clone, Debug)]
pub struct UniformRandom {
    rng: ChaCha8Rng,
}

impl UniformRandom {
    pub fn new(seed: u64) -> Self {
        UniformRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl PainterPolicy for UniformRandom {
    fn choose_color(&mut self, _: &GameState, _: VertexId, _: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        if !legal.is_choice() {
            return Ok(prefer(Blue, legal));
        }
        Ok(if self.rng.gen_bool(0.5) { Red } else { Blue })
    }
}

/// Weights of the heuristic score; lower scores are better for Painter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicParams {
    /// Longest blue path through `u` or `v` after coloring, over `n`.
    pub path: f64,
    /// 1 when a blue reply joins two blue components of two or more vertices.
    pub merge: f64,
    /// 1 when a red reply leaves a red path on `k - 1` vertices through the edge,
    /// so the next extension is forced blue.
    pub red: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        HeuristicParams {
            path: 1.0,
            merge: 1.0,
            red: 1.0,
        }
    }
}

/// Greedy one-ply adversary. Ties go to Red.
#[derive(Clone, Copy, Debug, Default)]
pub struct Heuristic {
    pub params: HeuristicParams,
}

impl Heuristic {
    pub fn score(&self, state: &GameState, u: VertexId, v: VertexId, c: Color) -> f64 {
        let b = &state.board;
        let n = state.config.n.max(1) as f64;
        let k = state.config.k;
        let from = |x| b.longest_path_from(Blue, x, None).unwrap_or(usize::MAX / 2);
        let p = self.params;
        match c {
            Blue => {
                let through = b.longest_path_through(Blue, u, v).unwrap_or(usize::MAX / 2);
                let joins = b.component_size(Blue, u) >= 2
                    && b.component_size(Blue, v) >= 2
                    && !b.same_component(Blue, u, v);
                p.path * through as f64 / n + if joins { p.merge } else { 0.0 }
            }
            Red => {
                let longest = from(u).max(from(v));
                let red = b.longest_path_through_capped(Red, u, v, k);
                p.path * longest as f64 / n + if red + 1 >= k { p.red } else { 0.0 }
            }
        }
    }
}

impl PainterPolicy for Heuristic {
    fn choose_color(&mut self, state: &GameState, u: VertexId, v: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        if !legal.is_choice() {
            return Ok(prefer(Blue, legal));
        }
        let red = self.score(state, u, v, Red);
        let blue = self.score(state, u, v, Blue);
        Ok(if red <= blue { Red } else { Blue })
    }
}

/// Bit `i` colors round `i + 1`: `false` asks for Red (Blue when Red is
/// illegal), `true` for Blue. Rounds past the script read `false`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scripted {
    pub bits: Vec<bool>,
}

impl Scripted {
    pub fn new(bits: Vec<bool>) -> Self {
        Scripted { bits }
    }
}

impl PainterPolicy for Scripted {
    fn choose_color(&mut self, state: &GameState, _: VertexId, _: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        let want = if self.bits.get(state.round).copied().unwrap_or(false) {
            Blue
        } else {
            Red
        };
        Ok(prefer(want, legal))
    }
}

/// Reads `r`, `b` or `q` per move from `input`, prompting on `output`.
pub struct Interactive<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Interactive { input, output }
    }
}

impl<R: BufRead, W: Write> PainterPolicy for Interactive<R, W> {
    fn choose_color(&mut self, state: &GameState, u: VertexId, v: VertexId, legal: LegalColors) -> Result<Color, PainterError> {
        let b = &state.board;
        writeln!(
            self.output,
            "board: {} red, {} blue edges; longest blue path {} vertices",
            b.count(Red),
            b.count(Blue),
            b.longest_path(Blue).unwrap_or(0)
        )?;
        loop {
            write!(self.output, "round {}: edge ({u},{v}) legal={legal}> ", state.round + 1)?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(PainterError::Aborted("input closed".into()));
            }
            let c = match line.trim() {
                "r" => Red,
                "b" => Blue,
                "q" => return Err(PainterError::Aborted("quit".into())),
                other => {
                    writeln!(self.output, "expected r, b or q, got {other:?}")?;
                    continue;
                }
            };
            if legal.contains(c) {
                return Ok(c);
            }
            writeln!(self.output, "{c} is not legal here")?;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PainterSpec {
    AllBlue,
    RedGreedy,
    UniformRandom(u64),
    Heuristic(HeuristicParams),
    Scripted(Vec<bool>),
    Interactive,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown painter {0:?}; expected all-blue, red-greedy, random:SEED, heuristic[:P,M,R], scripted:BITS or interactive")]
pub struct PainterParseError(pub String);

impl FromStr for PainterSpec {
    type Err = PainterParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PainterParseError(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("all-blue", None) => Ok(PainterSpec::AllBlue),
            ("red-greedy", None) => Ok(PainterSpec::RedGreedy),
            ("interactive", None) => Ok(PainterSpec::Interactive),
            ("random", Some(a)) => a.parse().map(PainterSpec::UniformRandom).map_err(|_| err()),
            ("heuristic", None) => Ok(PainterSpec::Heuristic(HeuristicParams::default())),
            ("heuristic", Some(a)) => {
                let w: Vec<f64> = a.split(',').map(str::parse).collect::<Result<_, _>>().map_err(|_| err())?;
                match w.as_slice() {
                    &[path, merge, red] => Ok(PainterSpec::Heuristic(HeuristicParams { path, merge, red })),
                    _ => Err(err()),
                }
            }
            ("scripted", Some(a)) => a
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(err()),
                })
                .collect::<Result<_, _>>()
                .map(PainterSpec::Scripted),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for PainterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PainterSpec::AllBlue => write!(f, "all-blue"),
            PainterSpec::RedGreedy => write!(f, "red-greedy"),
            PainterSpec::UniformRandom(s) => write!(f, "random:{s}"),
            PainterSpec::Heuristic(p) => write!(f, "heuristic:{},{},{}", p.path, p.merge, p.red),
            PainterSpec::Scripted(bits) => {
                let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "scripted:{s}")
            }
            PainterSpec::Interactive => write!(f, "interactive"),
        }
    }
}

impl PainterSpec {
    /// Deterministic specs give the same game every time.
    pub fn is_random(&self) -> bool {
        matches!(self, PainterSpec::UniformRandom(_))
    }

    /// Builds the policy; `Interactive` talks over stdin and stdout.
    pub fn build(&self) -> Box<dyn PainterPolicy> {
        match self {
            PainterSpec::AllBlue => Box::new(AllBlue),
            PainterSpec::RedGreedy => Box::new(RedGreedy),
            PainterSpec::UniformRandom(seed) => Box::new(UniformRandom::new(*seed)),
            PainterSpec::Heuristic(params) => Box::new(Heuristic { params: *params }),
            PainterSpec::Scripted(bits) => Box::new(Scripted::new(bits.clone())),
            PainterSpec::Interactive => Box::new(Interactive::new(std::io::stdin().lock(), std::io::stdout())),
        }
    }

    /// Same kind with a different seed; non-random specs are returned unchanged.
    pub fn reseeded(&self, seed: u64) -> PainterSpec {
        match self {
            PainterSpec::UniformRandom(_) => PainterSpec::UniformRandom(seed),
            other => other.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;

    fn state() -> GameState {
        GameState::new(GameConfig::restricted(4, 10)).unwrap()
    }

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn simple_policies() {
        let s = state();
        let only_blue = LegalColors::only(Blue);
        assert_eq!(AllBlue.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Blue);
        assert_eq!(RedGreedy.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Red);
        assert_eq!(RedGreedy.choose_color(&s, v(0), v(1), only_blue).unwrap(), Blue);
        let mut h = Heuristic::default();
        assert_eq!(h.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Red);
        assert_eq!(h.choose_color(&s, v(0), v(1), only_blue).unwrap(), Blue);
    }

    #[test]
    fn heuristic_blocks_merges() {
        let mut cfg = GameConfig::restricted(4, 10);
        cfg.initial_edges = [(0, 1), (1, 2), (3, 4), (4, 5)]
            .iter()
            .map(|&(a, b)| crate::board::Edge::new(v(a), v(b), Blue))
            .collect();
        let s = GameState::new(cfg).unwrap();
        assert_eq!(Heuristic::default().choose_color(&s, v(2), v(3), LegalColors::BOTH).unwrap(), Red);
    }

    #[test]
    fn scripted_reads_rounds() {
        let mut s = state();
        let mut p = Scripted::new(vec![true, false]);
        assert_eq!(p.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Blue);
        s.round = 1;
        assert_eq!(p.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Red);
        s.round = 7;
        assert_eq!(p.choose_color(&s, v(0), v(1), LegalColors::BOTH).unwrap(), Red);
        assert_eq!(p.choose_color(&s, v(0), v(1), LegalColors::only(Blue)).unwrap(), Blue);
    }

    #[test]
    fn interactive_protocol() {
        let s = state();
        let mut out = Vec::new();
        let mut p = Interactive::new(&b"x\nr\nb\n"[..], &mut out);
        assert_eq!(p.choose_color(&s, v(0), v(1), LegalColors::only(Blue)).unwrap(), Blue);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("round 1: edge (0,1) legal=[b]> "));
        assert_eq!(text.matches("legal=[b]> ").count(), 3);

        let mut sink = Vec::new();
        let mut eof = Interactive::new(&b""[..], &mut sink);
        assert!(matches!(
            eof.choose_color(&s, v(0), v(1), LegalColors::BOTH),
            Err(PainterError::Aborted(_))
        ));
        let mut q = Interactive::new(&b"q\n"[..], Vec::new());
        assert!(q.choose_color(&s, v(0), v(1), LegalColors::BOTH).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for text in ["all-blue", "red-greedy", "random:7", "heuristic:1,1,1", "scripted:0110", "interactive"] {
            let spec: PainterSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("random".parse::<PainterSpec>().is_err());
        assert!("heuristic:1,2".parse::<PainterSpec>().is_err());
        assert!("scripted:012".parse::<PainterSpec>().is_err());
    }
}
