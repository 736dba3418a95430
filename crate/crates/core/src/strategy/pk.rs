//! Builder for `RR(Pk, Pn)`, `k >= 5`, in three stages: many blue `P3`s,
//! fewer than `k` blue paths, one long blue path.

use std::borrow::Cow;
use rustc_hash::FxHashSet as HashSet;

use serde::Serialize;

use crate::board::{Color, ColoredGraph, VertexId};
use crate::game::{Arena, GameConfig, Halt, Strategy, StrategyError};

use Color::{Blue, Red};

/// `T = ceil(n/3) + k`.
pub fn pk_t(k: usize, n: usize) -> usize {
    n.div_ceil(3) + k
}

/// `5T + 7k - 6`.
pub fn pk_internal_bound(k: usize, n: usize) -> usize {
    5 * pk_t(k, n) + 7 * k - 6
}

/// `floor(5n/3) + 12k`.
pub fn pk_bound(k: usize, n: usize) -> usize {
    5 * n / 3 + 12 * k
}

/// Stage-1 bookkeeping: the active red path with its blue matching, and the
/// frozen blue `P3`s with the red edges frozen alongside them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveLedger {
    pub active_red_path: Vec<VertexId>,
    /// `(on path, off path)`.
    pub active_blue_matching: Vec<(VertexId, VertexId)>,
    pub inactive_blue_paths: Vec<[VertexId; 3]>,
    pub inactive_red_edges: Vec<(VertexId, VertexId)>,
}

impl ActiveLedger {
    /// The end of the active red path Builder plays from; `None` means a free vertex.
    pub fn next_endpoint(&self) -> Option<VertexId> {
        self.active_red_path.last().copied()
    }

    fn matched(&self, x: VertexId) -> Option<usize> {
        self.active_blue_matching.iter().position(|&(p, _)| p == x)
    }

    /// Applies Painter's reply to `xy`, `y` fresh.
    pub fn update(&mut self, x: VertexId, y: VertexId, color: Color) {
        match color {
            Red => {
                let p = &mut self.active_red_path;
                if p.is_empty() {
                    p.push(x);
                }
                p.push(y);
            }
            Blue => match self.matched(x) {
                Some(i) => {
                    let (_, z) = self.active_blue_matching.remove(i);
                    self.inactive_blue_paths.push([z, x, y]);
                    let p = &mut self.active_red_path;
                    if p.len() >= 2 {
                        self.inactive_red_edges.push((p[p.len() - 2], x));
                    }
                    p.pop();
                    if p.len() == 1 && self.matched(self.active_red_path[0]).is_none() {
                        self.active_red_path.clear();
                    }
                }
                None => {
                    let p = &mut self.active_red_path;
                    if p.is_empty() {
                        p.push(x);
                    }
                    self.active_blue_matching.push((x, y));
                }
            },
        }
    }

    /// Clauses (i)-(iv) against the board; each entry is a violation.
    pub fn check(&self, board: &ColoredGraph, k: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut active: HashSet<(VertexId, VertexId)> = HashSet::default();
        let mut inactive: HashSet<(VertexId, VertexId)> = HashSet::default();
        let key = |a: VertexId, b: VertexId| if a < b { (a, b) } else { (b, a) };
        let expect = |set: &mut HashSet<_>, a, b, c: Color, out: &mut Vec<String>| {
            if board.color(a, b) != Some(c) {
                out.push(format!("{a}-{b} should be {c}"));
            }
            set.insert(key(a, b));
        };
        let p = &self.active_red_path;
        for w in p.windows(2) {
            expect(&mut active, w[0], w[1], Red, &mut out);
        }
        for &(a, b) in &self.active_blue_matching {
            expect(&mut active, a, b, Blue, &mut out);
        }
        for q in &self.inactive_blue_paths {
            expect(&mut inactive, q[0], q[1], Blue, &mut out);
            expect(&mut inactive, q[1], q[2], Blue, &mut out);
        }
        for &(a, b) in &self.inactive_red_edges {
            expect(&mut inactive, a, b, Red, &mut out);
        }
        // (i)
        if active.intersection(&inactive).next().is_some() {
            out.push("(i) an edge is both active and inactive".into());
        }
        if active.len() + inactive.len() != board.edge_count() {
            out.push(format!(
                "ledger holds {} edges, board has {}",
                active.len() + inactive.len(),
                board.edge_count()
            ));
        }
        // (ii)
        let mut va: HashSet<VertexId> = HashSet::default();
        for &(a, b) in &active {
            va.insert(a);
            va.insert(b);
        }
        for q in &self.inactive_blue_paths {
            if q.iter().any(|v| va.contains(v)) {
                out.push(format!("(ii) inactive P3 {q:?} touches the active graph"));
            }
        }
        // (iii)
        let on_path: HashSet<VertexId> = p.iter().copied().collect();
        if on_path.len() != p.len() {
            out.push("(iii) active red path repeats a vertex".into());
        }
        if p.len() >= k {
            out.push(format!("(iii) active red path has {} vertices", p.len()));
        }
        let mut matched = HashSet::default();
        for &(a, b) in &self.active_blue_matching {
            if !matched.insert(a) || !matched.insert(b) {
                out.push(format!("(iii) matching edge {a}-{b} shares a vertex"));
            }
            if !on_path.contains(&a) || on_path.contains(&b) {
                out.push(format!("(iii) matching edge {a}-{b} lacks exactly one end on the path"));
            }
        }
        // (iv)
        let mut seen = HashSet::default();
        for q in &self.inactive_blue_paths {
            if q.iter().any(|&v| !seen.insert(v)) {
                out.push(format!("(iv) inactive P3 {q:?} overlaps another"));
            }
        }
        if self.inactive_red_edges.len() > self.inactive_blue_paths.len() {
            out.push(format!(
                "(iv) {} inactive red edges for {} P3s",
                self.inactive_red_edges.len(),
                self.inactive_blue_paths.len()
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PkReport {
    pub t: usize,
    pub stage_rounds: [usize; 3],
    pub stage_bounds: [usize; 3],
    /// Blue paths left after Stage 2.
    pub paths_after_stage2: usize,
    pub ledger_checks: usize,
    pub violations: Vec<String>,
}

pub struct PkBuilder {
    k: usize,
    n: usize,
    strict: bool,
    report: PkReport,
}

impl PkBuilder {
    pub fn new(k: usize, n: usize) -> Result<Self, StrategyError> {
        if k < 5 {
            return Err(StrategyError::Precondition(format!("Pk builder needs k >= 5, got {k}")));
        }
        if n == 0 {
            return Err(StrategyError::Precondition("n must be positive".into()));
        }
        Ok(PkBuilder {
            k,
            n,
            strict: true,
            report: PkReport::default(),
        })
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }

    pub fn report(&self) -> &PkReport {
        &self.report
    }

    fn flag(&mut self, msg: String) -> Result<(), Halt> {
        self.report.violations.push(msg.clone());
        if self.strict {
            return Err(Halt::Strategy(StrategyError::Invariant(msg)));
        }
        Ok(())
    }

    fn stage_bound(&mut self, stage: usize, used: usize, bound: usize) -> Result<(), Halt> {
        self.report.stage_rounds[stage] = used;
        self.report.stage_bounds[stage] = bound;
        if used > bound {
            let what = ["pk stage 1 rounds", "pk stage 2 rounds", "pk stage 3 rounds"][stage];
            self.report.violations.push(format!("{what}: {used} > {bound}"));
            if self.strict {
                return Err(Halt::Strategy(StrategyError::Bound {
                    what: Cow::Borrowed(what),
                    value: used,
                    bound,
                }));
            }
        }
        Ok(())
    }

    fn stage1(&mut self, a: &mut dyn Arena, t: usize) -> Result<Vec<Vec<VertexId>>, Halt> {
        let mut ledger = ActiveLedger::default();
        while ledger.inactive_blue_paths.len() < t {
            let x = match ledger.next_endpoint() {
                Some(x) => x,
                None => a.fresh(),
            };
            let y = a.fresh();
            let c = a.select(x, y, "pk/stage1/extend")?;
            ledger.update(x, y, c);
            self.report.ledger_checks += 1;
            let bad = ledger.check(a.board(), self.k);
            if !bad.is_empty() {
                self.flag(format!("round {}: {}", a.round(), bad.join("; ")))?;
            }
        }
        Ok(ledger.inactive_blue_paths.iter().map(|q| q.to_vec()).collect())
    }

    /// Essential ends sit at the front of each path.
    fn stage2(&mut self, a: &mut dyn Arena, mut paths: Vec<Vec<VertexId>>) -> Result<Vec<Vec<VertexId>>, Halt> {
        let m: usize = paths.iter().map(Vec::len).sum();
        let mut d = 1;
        while paths.len() >= self.k {
            let (ud, ud1) = (paths[d - 1][0], paths[d][0]);
            if a.select(ud, ud1, "pk/stage2/glue/select")? == Red {
                d += 1;
            } else {
                let tail = paths.remove(d);
                let mut merged: Vec<VertexId> = paths[d - 1].iter().rev().copied().collect();
                merged.extend(tail);
                paths[d - 1] = merged;
                d = (d - 1).max(1);
            }
            if let Err(e) = certify_essential(a.board(), &paths, d, m, self.k) {
                self.flag(format!("round {}: {e}", a.round()))?;
            }
        }
        Ok(paths)
    }

    fn stage3(&mut self, a: &mut dyn Arena, mut paths: Vec<Vec<VertexId>>) -> Result<(), Halt> {
        let mut g0 = paths.remove(0);
        let mut w = vec![g0[0]];
        let mut others = paths;
        let mut total: usize = g0.len() + others.iter().map(Vec::len).sum::<usize>();
        while !others.is_empty() {
            let wd = *w.last().unwrap();
            let (u2, u2p) = (others[0][0], *others[0].last().unwrap());
            if a.select(wd, u2, "pk/stage3/glue/first")? == Red {
                a.select(wd, u2, "pk/stage3/glue/reselect")?;
                w.push(u2);
                let old = std::mem::replace(&mut g0, others.remove(0));
                if old.len() > 1 {
                    others.insert(0, old[1..].to_vec());
                }
            } else {
                let g2 = others.remove(0);
                let mut joined: Vec<VertexId> = g2.iter().rev().copied().collect();
                joined.extend(&g0);
                if w.len() >= 2 {
                    let wd1 = w[w.len() - 2];
                    w.pop();
                    if a.select(wd1, u2p, "pk/stage3/glue/second")? == Red {
                        w.push(u2p);
                        g0 = joined;
                    } else {
                        joined.insert(0, wd1);
                        g0 = joined;
                    }
                } else {
                    a.select(wd, u2, "pk/stage3/glue/reselect")?;
                    w = vec![u2p];
                    g0 = joined;
                }
            }
            let now = g0.len() + others.iter().map(Vec::len).sum::<usize>();
            if let Err(e) = certify_fence(a.board(), &w, &g0, &others, self.k) {
                self.flag(format!("round {}: {e}", a.round()))?;
            }
            if now + 1 < total {
                self.flag(format!("round {}: pickets shrank from {total} to {now}", a.round()))?;
            }
            total = now;
        }
        Ok(())
    }
}

/// Re-derives an essential `(s, d, m)`-graph from the board.
fn certify_essential(
    board: &ColoredGraph,
    paths: &[Vec<VertexId>],
    d: usize,
    m: usize,
    k: usize,
) -> Result<(), String> {
    certify_blue_paths(board, paths, true)?;
    let total: usize = paths.iter().map(Vec::len).sum();
    if total != m {
        return Err(format!("essential paths cover {total} vertices, expected {m}"));
    }
    if d == 0 || d > paths.len() || d >= k {
        return Err(format!("d={d} with s={}", paths.len()));
    }
    for i in 1..d {
        if board.color(paths[i - 1][0], paths[i][0]) != Some(Red) {
            return Err(format!("essential red path broken between paths {} and {}", i, i + 1));
        }
    }
    Ok(())
}

/// Re-derives a fence: red picket `w`, `g0` starting at its last vertex, other pickets.
fn certify_fence(
    board: &ColoredGraph,
    w: &[VertexId],
    g0: &[VertexId],
    others: &[Vec<VertexId>],
    k: usize,
) -> Result<(), String> {
    if w.is_empty() || w.len() >= k {
        return Err(format!("red picket has {} vertices", w.len()));
    }
    if g0.first() != w.last() {
        return Err("G0 does not start at the end of the red picket".into());
    }
    for p in w.windows(2) {
        if board.color(p[0], p[1]) != Some(Red) {
            return Err(format!("red picket edge {}-{} is not red", p[0], p[1]));
        }
    }
    let mut all = vec![g0.to_vec()];
    all.extend(others.iter().cloned());
    certify_blue_paths(board, &all, false)?;
    let picket: HashSet<VertexId> = all.iter().flatten().copied().collect();
    if w[..w.len() - 1].iter().any(|v| picket.contains(v)) {
        return Err("red picket meets a blue picket".into());
    }
    Ok(())
}

/// Blue and pairwise disjoint; with `whole`, each one is a whole component of the blue graph.
fn certify_blue_paths(board: &ColoredGraph, paths: &[Vec<VertexId>], whole: bool) -> Result<(), String> {
    let mut seen = HashSet::default();
    for p in paths {
        if p.is_empty() {
            return Err("empty blue path".into());
        }
        for &v in p {
            if !seen.insert(v) {
                return Err(format!("vertex {v} on two blue paths"));
            }
        }
        for e in p.windows(2) {
            if board.color(e[0], e[1]) != Some(Blue) {
                return Err(format!("{}-{} is not blue", e[0], e[1]));
            }
        }
        if whole && board.component_size(Blue, p[0]) != p.len() {
            return Err(format!("blue path at {} has extra blue edges attached", p[0]));
        }
    }
    Ok(())
}

impl Strategy for PkBuilder {
    fn name(&self) -> &'static str {
        "pk"
    }

    fn config(&self) -> GameConfig {
        GameConfig::restricted(self.k, self.n).with_reselect(true)
    }

    fn bound(&self) -> usize {
        pk_bound(self.k, self.n)
    }

    fn play(&mut self, a: &mut dyn Arena) -> Result<(), Halt> {
        let (k, n) = (self.k, self.n);
        let t = pk_t(k, n);
        self.report = PkReport {
            t,
            ..PkReport::default()
        };
        let r0 = a.round();
        let p3s = self.stage1(a, t)?;
        let r1 = a.round();
        self.stage_bound(0, r1 - r0, 3 * t + 2 * (k - 1))?;

        let paths = self.stage2(a, p3s)?;
        let r2 = a.round();
        self.stage_bound(1, r2 - r1, (2 * t).saturating_sub(k))?;
        if let Err(e) = certify_blue_paths(a.board(), &paths, true) {
            self.flag(format!("stage 2 handoff: {e}"))?;
        }
        self.report.paths_after_stage2 = paths.len();

        let tt = paths.len();
        let result = self.stage3(a, paths);
        let r3 = a.round();
        self.stage_bound(2, r3 - r2, 4 * tt + 2 * k)?;
        result
    }

    fn counters(&self) -> Vec<(&'static str, usize)> {
        vec![("ledger_checks", self.report.ledger_checks)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play_strategy, PainterPolicy, Status};
    use crate::painters::{AllBlue, Heuristic, RedGreedy, UniformRandom};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn bounds() {
        assert_eq!(pk_t(5, 30), 15);
        assert_eq!(pk_internal_bound(5, 30), 104);
        assert_eq!(pk_bound(5, 30), 110);
        assert_eq!(3 * pk_t(5, 30) + 2 * 4, 53);
        assert_eq!(3 * pk_t(5, 3) + 2 * 4, 26);
        assert!(PkBuilder::new(4, 30).is_err());
    }

    #[test]
    fn ledger_case_split() {
        let mut l = ActiveLedger::default();
        assert_eq!(l.next_endpoint(), None);
        l.update(v(0), v(1), Red);
        assert_eq!(l.active_red_path, vec![v(0), v(1)]);
        assert_eq!(l.next_endpoint(), Some(v(1)));
        l.update(v(1), v(2), Blue);
        assert_eq!(l.active_blue_matching, vec![(v(1), v(2))]);
        l.update(v(1), v(3), Blue);
        assert_eq!(l.inactive_blue_paths, vec![[v(2), v(1), v(3)]]);
        assert_eq!(l.inactive_red_edges, vec![(v(0), v(1))]);
        // `0` keeps no active edge, so the active graph is empty again
        assert!(l.active_red_path.is_empty());
        assert_eq!(l.next_endpoint(), None);
    }

    #[test]
    fn ledger_blue_start() {
        let mut l = ActiveLedger::default();
        l.update(v(0), v(1), Blue);
        assert_eq!(l.active_red_path, vec![v(0)]);
        l.update(v(0), v(2), Blue);
        assert_eq!(l.inactive_blue_paths, vec![[v(1), v(0), v(2)]]);
        assert!(l.inactive_red_edges.is_empty());
        assert!(l.active_red_path.is_empty());
    }

    #[test]
    fn all_blue_stage1_takes_two_rounds_per_p3() {
        let mut b = PkBuilder::new(5, 30).unwrap();
        let cfg = b.config();
        let played = play_strategy(&mut b, &mut AllBlue, &cfg).unwrap();
        assert_eq!(played.state.status, Status::BlueWin);
        assert_eq!(b.report().stage_rounds[0], 2 * pk_t(5, 30));
        assert_eq!(b.report().stage_rounds[0], 30);
    }

    #[test]
    fn sampled_painters_stay_within_bounds() {
        for n in [10, 17, 30, 44, 60] {
            let mut painters: Vec<Box<dyn PainterPolicy>> =
                vec![Box::new(AllBlue), Box::new(RedGreedy), Box::new(Heuristic::default())];
            painters.extend((0..15).map(|s| Box::new(UniformRandom::new(s)) as Box<dyn PainterPolicy>));
            for (i, p) in painters.iter_mut().enumerate() {
                let mut b = PkBuilder::new(5, n).unwrap();
                let cfg = b.config();
                let played = play_strategy(&mut b, p.as_mut(), &cfg).unwrap();
                assert!(played.failure.is_none(), "n={n} painter {i}: {:?}", played.failure);
                assert_eq!(played.state.status, Status::BlueWin, "n={n} painter {i}");
                assert!(played.transcript.rounds <= pk_internal_bound(5, n), "n={n} painter {i}");
                assert!(pk_internal_bound(5, n) <= pk_bound(5, n));
                let rep = b.report();
                for s in 0..3 {
                    assert!(rep.stage_rounds[s] <= rep.stage_bounds[s], "n={n} painter {i} stage {s}");
                }
            }
        }
    }
}
