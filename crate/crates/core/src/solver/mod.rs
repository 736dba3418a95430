//! Exact online size Ramsey numbers `r̃(Pk, Pn)` for tiny parameters.
//!
//! `win(g, R)` asks whether Builder, from host graph `g`, forces a red `Pk`
//! or a blue `Pn` within `R` more rounds. Positions are memoized by
//! canonical key with the largest losing and smallest winning horizon seen.

pub mod canon;

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::board::{Color, ColoredGraph, VertexId};
pub use canon::{canonicalize, CanonError, CanonicalKey};

/// `(k-1) + (n-1) - 1`.
pub fn lower_bound(k: usize, n: usize) -> usize {
    k + n - 3
}

/// `2n + 2k - 7`.
pub fn upper_bound(k: usize, n: usize) -> usize {
    2 * n + 2 * k - 7
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub k: usize,
    pub n: usize,
    /// Largest horizon searched.
    pub round_budget: usize,
    /// Largest number of non-isolated vertices a searched position may have.
    pub vertex_budget: usize,
    /// Give up once this many positions were expanded.
    pub node_budget: Option<u64>,
    pub memo: bool,
    pub parallel: bool,
}

impl SolverConfig {
    pub fn new(k: usize, n: usize) -> Self {
        let round_budget = upper_bound(k.max(2), n.max(2));
        SolverConfig {
            k,
            n,
            round_budget,
            vertex_budget: 2 * round_budget,
            node_budget: None,
            memo: true,
            parallel: true,
        }
    }

    pub fn with_budget(mut self, rounds: usize) -> Self {
        self.round_budget = rounds;
        self.vertex_budget = 2 * rounds;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveValue {
    Exact(usize),
    Bracket { lower: usize, upper: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub k: usize,
    pub n: usize,
    pub value: SolveValue,
    pub nodes_expanded: u64,
    pub memo_hits: u64,
    pub wall_time_ms: u128,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    Config(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error("no win within {0} rounds, contradicting the general upper bound")]
    Inconsistent(usize),
}

#[derive(Debug)]
enum Stop {
    Budget,
    Canon(CanonError),
}

impl From<CanonError> for Stop {
    fn from(e: CanonError) -> Self {
        Stop::Canon(e)
    }
}

#[derive(Clone, Copy)]
struct Entry {
    /// Largest horizon known to lose.
    lose: u8,
    /// Smallest horizon known to win.
    win: u8,
}

/// One Builder move with what each reply leads to; `None` means the reply ends the game.
struct Candidate {
    red: Option<CanonicalKey>,
    blue: Option<CanonicalKey>,
}

struct Searcher {
    k: usize,
    n: usize,
    vertex_budget: usize,
    node_budget: Option<u64>,
    use_memo: bool,
    memo: DashMap<CanonicalKey, Entry>,
    nodes: AtomicU64,
    hits: AtomicU64,
    stopped: AtomicBool,
}

fn fresh_pair(g: &ColoredGraph) -> (VertexId, VertexId) {
    let next = g.vertex_bound() as u32;
    (VertexId(next), VertexId(next + 1))
}

/// Builder moves up to isomorphism: uncolored pairs of non-isolated vertices,
/// one `(v, fresh)` per vertex `v`, and `(fresh, fresh)`, deduplicated by the
/// pair of positions the two replies lead to.
pub fn builder_move_candidates(g: &ColoredGraph, k: usize, n: usize) -> Result<Vec<(VertexId, VertexId)>, CanonError> {
    Ok(raw_candidates(g, k, n)?.into_iter().map(|(u, v, _)| (u, v)).collect())
}

fn raw_candidates(g: &ColoredGraph, k: usize, n: usize) -> Result<Vec<(VertexId, VertexId, Candidate)>, CanonError> {
    let vs = g.vertices();
    let (f1, f2) = fresh_pair(g);
    let mut pairs = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if g.color(a, b).is_none() {
                pairs.push((a, b));
            }
        }
    }
    pairs.extend(vs.iter().map(|&a| (a, f1)));
    pairs.push((f1, f2));

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (u, v) in pairs {
        let red_done = g.longest_path_through_capped(Color::Red, u, v, k) >= k;
        let blue_done = g.longest_path_through_capped(Color::Blue, u, v, n) >= n;
        let child = |c: Color| -> Result<CanonicalKey, CanonError> {
            let mut h = g.clone();
            h.add_edge(u, v, c).expect("candidate pairs are uncolored");
            canonicalize(&h)
        };
        let red = if red_done { None } else { Some(child(Color::Red)?) };
        let blue = if blue_done { None } else { Some(child(Color::Blue)?) };
        if seen.insert((red.clone(), blue.clone())) {
            out.push((u, v, Candidate { red, blue }));
        }
    }
    Ok(out)
}

impl Searcher {
    fn lookup(&self, key: &CanonicalKey, r: usize) -> Option<bool> {
        if !self.use_memo {
            return None;
        }
        let e = *self.memo.get(key)?;
        if r >= e.win as usize {
            Some(true)
        } else if r <= e.lose as usize {
            Some(false)
        } else {
            None
        }
    }

    fn store(&self, key: CanonicalKey, r: usize, won: bool) {
        if !self.use_memo {
            return;
        }
        let r = r as u8;
        let mut e = self.memo.entry(key).or_insert(Entry { lose: 0, win: u8::MAX });
        if won {
            e.win = e.win.min(r);
        } else {
            e.lose = e.lose.max(r);
        }
    }

    fn expand(&self, g: &ColoredGraph) -> Result<Vec<Candidate>, Stop> {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.stopped.load(Ordering::Relaxed) || self.node_budget.is_some_and(|b| count > b) {
            self.stopped.store(true, Ordering::Relaxed);
            return Err(Stop::Budget);
        }
        let mut c: Vec<Candidate> = raw_candidates(g, self.k, self.n)?
            .into_iter()
            .map(|(_, _, c)| c)
            .collect();
        // moves where one reply already ends the game first
        c.sort_by_key(|c| usize::from(c.red.is_some()) + usize::from(c.blue.is_some()));
        Ok(c)
    }

    fn side(&self, child: &Option<CanonicalKey>, r: usize) -> Result<bool, Stop> {
        match child {
            None => Ok(true),
            Some(key) => self.win(key, r),
        }
    }

    fn win(&self, key: &CanonicalKey, r: usize) -> Result<bool, Stop> {
        if r == 0 {
            return Ok(false);
        }
        if let Some(v) = self.lookup(key, r) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let g = key.to_graph();
        if g.vertices().len() > self.vertex_budget {
            return Ok(false);
        }
        let cands = self.expand(&g)?;
        let mut won = false;
        for c in &cands {
            if r == 1 && (c.red.is_some() || c.blue.is_some()) {
                continue;
            }
            if self.side(&c.red, r - 1)? && self.side(&c.blue, r - 1)? {
                won = true;
                break;
            }
        }
        self.store(key.clone(), r, won);
        Ok(won)
    }

    fn win_root(&self, key: &CanonicalKey, r: usize, parallel: bool) -> Result<bool, Stop> {
        if !parallel {
            return self.win(key, r);
        }
        let cands = self.expand(&key.to_graph())?;
        let found = cands
            .par_iter()
            .map(|c| Ok(self.side(&c.red, r - 1)? && self.side(&c.blue, r - 1)?))
            .find_any(|res: &Result<bool, Stop>| !matches!(res, Ok(false)));
        match found {
            Some(res) => res,
            None => Ok(false),
        }
    }
}

/// Minimax value of the Standard game from the empty board, by iterative
/// deepening from the general lower bound.
pub fn solve(cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    let (k, n) = (cfg.k, cfg.n);
    if k < 2 || n < 2 {
        return Err(SolverError::Config(format!("need k, n >= 2, got k={k} n={n}")));
    }
    let (lo, hi) = (lower_bound(k, n), upper_bound(k, n));
    if cfg.round_budget < lo {
        return Err(SolverError::Config(format!(
            "round budget {} below the lower bound {lo}",
            cfg.round_budget
        )));
    }
    if cfg.round_budget > 250 {
        return Err(SolverError::Config("round budget above 250".into()));
    }
    let start = Instant::now();
    let s = Searcher {
        k,
        n,
        vertex_budget: cfg.vertex_budget,
        node_budget: cfg.node_budget,
        use_memo: cfg.memo,
        memo: DashMap::new(),
        nodes: AtomicU64::new(0),
        hits: AtomicU64::new(0),
        stopped: AtomicBool::new(false),
    };
    let root = canonicalize(&ColoredGraph::new())?;
    let top = cfg.round_budget.min(hi);
    let mut value = SolveValue::Bracket {
        lower: top + 1,
        upper: hi,
    };
    for r in lo..=top {
        log::debug!("solve k={k} n={n}: horizon {r}");
        match s.win_root(&root, r, cfg.parallel) {
            Ok(true) => {
                value = SolveValue::Exact(r);
                break;
            }
            Ok(false) => {}
            Err(Stop::Budget) => {
                value = SolveValue::Bracket { lower: r, upper: hi };
                break;
            }
            Err(Stop::Canon(e)) => return Err(e.into()),
        }
    }
    if value == (SolveValue::Bracket { lower: hi + 1, upper: hi }) {
        return Err(SolverError::Inconsistent(hi));
    }
    Ok(SolveResult {
        k,
        n,
        value,
        nodes_expanded: s.nodes.load(Ordering::Relaxed),
        memo_hits: s.hits.load(Ordering::Relaxed),
        wall_time_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::{Blue as B, Red as R};

    fn exact(k: usize, n: usize) -> usize {
        match solve(&SolverConfig::new(k, n)).unwrap().value {
            SolveValue::Exact(v) => v,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn candidate_classes() {
        let empty = ColoredGraph::new();
        assert_eq!(builder_move_candidates(&empty, 3, 3).unwrap().len(), 1);
        let ab = ColoredGraph::from_edges([(0, 1, B)]).unwrap();
        assert_eq!(builder_move_candidates(&ab, 3, 4).unwrap().len(), 2);
        let abc = ColoredGraph::from_edges([(0, 1, R), (1, 2, R)]).unwrap();
        assert!(builder_move_candidates(&abc, 4, 4).unwrap().len() <= 4);
    }

    #[test]
    fn small_values() {
        assert_eq!(exact(2, 2), 1);
        assert_eq!(exact(2, 3), 2);
        assert_eq!(exact(2, 4), 3);
        assert_eq!(exact(3, 3), 3);
        assert_eq!(exact(3, 6), 7);
        assert_eq!(exact(4, 5), 6);
        assert_eq!(exact(4, 6), 8);
    }

    #[test]
    fn node_budget_gives_a_bracket() {
        let mut cfg = SolverConfig::new(3, 5);
        cfg.node_budget = Some(1);
        let r = solve(&cfg).unwrap();
        assert_eq!(r.value, SolveValue::Bracket { lower: 5, upper: 9 });
        assert!(solve(&SolverConfig::new(3, 5).with_budget(4)).is_err());
    }

    #[test]
    fn memo_agrees_with_plain_search() {
        for (k, n) in [(2, 4), (3, 3), (3, 4)] {
            let mut plain = SolverConfig::new(k, n);
            plain.memo = false;
            plain.parallel = false;
            assert_eq!(solve(&plain).unwrap().value, SolveValue::Exact(exact(k, n)));
        }
    }
}
