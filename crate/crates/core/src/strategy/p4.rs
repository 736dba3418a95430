//! Builder for `RR(P4, Pn)`, `n >= 10`: grow a very good graph five
//! essential vertices at a time, absorb the remainder, then assemble one blue path.

use serde::Serialize;

use crate::board::{Color, VertexId};
use crate::game::{Arena, GameConfig, GameState, Halt, Status, Strategy, StrategyError};
use crate::paths::{ExtendedPathCert, LimbCert};
use crate::strategy::good::{check_good, check_very_good, edge_budget, red_allowance, Clause, GoodGraphState};

use Color::{Blue, Red};

/// `ceil(7n/5) - 1`.
pub fn p4_bound(n: usize) -> usize {
    (7 * n).div_ceil(5) - 1
}

/// A simple good graph about to be glued in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    /// `(P, ∅, ∅, ∅)`.
    Plain(Vec<VertexId>),
    /// `(∅, P, ∅, ∅)`; both ends head red edges.
    OneOne(Vec<VertexId>),
    /// `(∅, ∅, P, ∅)`.
    Extended(ExtendedPathCert),
}

/// What a game taught us about the decomposition, filled in while playing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct P4Report {
    pub checkpoints: usize,
    /// Checkpoints where a 1-end of `G1` touched the blue end of `G2`.
    pub blue_end_adjacency: usize,
    /// Any other failed condition, edge budget or deletion check.
    pub violations: Vec<String>,
    /// `Some(i)` when the remainder went exceptional and subcase `i` ran.
    pub exceptional: Option<u8>,
    pub stage_rounds: [usize; 3],
}

pub struct P4Builder {
    n: usize,
    /// Halt on the first bug-signal violation instead of only recording it.
    strict: bool,
    report: P4Report,
}

impl P4Builder {
    pub fn new(n: usize) -> Result<Self, StrategyError> {
        if n < 10 {
            return Err(StrategyError::Precondition(format!("P4 builder needs n >= 10, got {n}")));
        }
        Ok(P4Builder {
            n,
            strict: true,
            report: P4Report::default(),
        })
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }

    pub fn report(&self) -> &P4Report {
        &self.report
    }
}

impl Strategy for P4Builder {
    fn name(&self) -> &'static str {
        "p4"
    }

    fn config(&self) -> GameConfig {
        GameConfig::restricted(4, self.n)
    }

    fn bound(&self) -> usize {
        p4_bound(self.n)
    }

    fn play(&mut self, arena: &mut dyn Arena) -> Result<(), Halt> {
        self.report = P4Report::default();
        let mut run = Run {
            a: arena,
            st: GoodGraphState::default(),
            report: &mut self.report,
            strict: self.strict,
        };
        let start = run.a.round();
        let m = 5 * (self.n / 5);
        for i in 1..=m / 5 {
            run.grow_by_5()?;
            run.checkpoint(true, 5 * i)?;
        }
        let s2 = run.a.round();
        run.report.stage_rounds[0] = s2 - start;
        let red_ab = run.remainder(self.n - m)?;
        let s3 = run.a.round();
        run.report.stage_rounds[1] = s3 - s2;
        match red_ab {
            None => {
                run.checkpoint(false, self.n)?;
                run.stage3()?;
            }
            Some((a, b)) => run.exceptional(a, b, self.n)?,
        }
        run.report.stage_rounds[2] = run.a.round() - s3;
        Ok(())
    }

    fn audit(&self, state: &GameState) -> Vec<String> {
        let mut out = self.report.violations.clone();
        if state.status == Status::BlueWin {
            let reds = state.board.count(Red);
            let blues = state.board.count(Blue);
            if reds > red_allowance(self.n) {
                out.push(format!("{reds} red edges above {}", red_allowance(self.n)));
            }
            if blues != self.n - 1 {
                out.push(format!("{blues} blue edges, expected {}", self.n - 1));
            }
        }
        out
    }

    fn counters(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("checkpoints", self.report.checkpoints),
            ("blue_end_adjacency", self.report.blue_end_adjacency),
            ("exceptional", usize::from(self.report.exceptional.is_some())),
        ]
    }
}

struct Run<'a> {
    a: &'a mut dyn Arena,
    st: GoodGraphState,
    report: &'a mut P4Report,
    strict: bool,
}

fn invariant(msg: String) -> Halt {
    Halt::Strategy(StrategyError::Invariant(msg))
}

fn rev(p: &[VertexId]) -> Vec<VertexId> {
    p.iter().rev().copied().collect()
}

fn cat(parts: &[&[VertexId]]) -> Vec<VertexId> {
    parts.concat()
}

impl Run<'_> {
    fn fresh(&mut self) -> VertexId {
        self.a.fresh()
    }

    fn select(&mut self, u: VertexId, v: VertexId, note: &'static str) -> Result<Color, Halt> {
        self.a.select(u, v, note)
    }

    fn force(&mut self, u: VertexId, v: VertexId, note: &'static str) -> Result<(), Halt> {
        self.a.force(u, v, note)
    }

    /// Checks the decomposition against the board: (A)-(F) or (A)-(G), the
    /// edge budget, and goodness after deleting `G0` or `L`.
    fn checkpoint(&mut self, very: bool, ess: usize) -> Result<(), Halt> {
        self.report.checkpoints += 1;
        let board = self.a.board();
        let mut found = Vec::new();
        if self.st.ess() != ess {
            found.push(format!("ess={} expected {ess}", self.st.ess()));
        }
        let main = if very {
            check_very_good(&self.st, board)
        } else {
            check_good(&self.st, board)
        };
        let mut blue_end = false;
        let mut record = |label: &str, vs: Vec<crate::strategy::good::Violation>, found: &mut Vec<String>| {
            for v in vs {
                if v.clause == Clause::CAdjacentBlueEnd {
                    blue_end = true;
                } else {
                    found.push(format!("{label}: {v}"));
                }
            }
        };
        record("state", main, &mut found);
        let budget = edge_budget(self.st.ess());
        if board.edge_count() > budget {
            found.push(format!("{} edges above budget {budget}", board.edge_count()));
        }
        if !self.st.g0.is_empty() {
            let reduced = board.without_vertices(&self.st.g0);
            record("without G0", check_good(&self.st.without_g0(), &reduced), &mut found);
        }
        if let Some(l) = self.st.limb {
            let reduced = board.without_vertices(&l.x);
            record("without L", check_good(&self.st.without_limb(), &reduced), &mut found);
        }
        if blue_end {
            self.report.blue_end_adjacency += 1;
        }
        let round = self.a.round();
        for f in &found {
            self.report.violations.push(format!("round {round}: {f}"));
        }
        if self.strict && !found.is_empty() {
            return Err(invariant(format!("round {round}: {}", found.join("; "))));
        }
        Ok(())
    }

    /// Adds a simple good piece to the (very good) decomposition.
    fn glue(&mut self, piece: Piece) -> Result<(), Halt> {
        match piece {
            Piece::OneOne(p) => {
                if let Some(&end) = self.st.g1.last() {
                    self.force(end, p[0], "p4/glue/case1/join")?;
                }
                self.st.g1.extend(p);
            }
            Piece::Extended(p) => {
                let Some(g2) = self.st.g2.take() else {
                    self.st.g2 = Some(p);
                    return Ok(());
                };
                self.force(p.transition, g2.blue_end, "p4/glue/case2/join")?;
                self.st.g2 = Some(ExtendedPathCert::new(cat(&[&p.blue_vertices, &g2.blue_vertices]), g2.red_end));
                let x = p.red_end;
                if let Some(&end) = self.st.g1.last() {
                    self.force(x, end, "p4/glue/case2/red-end")?;
                }
                self.st.g1.push(x);
            }
            Piece::Plain(p) => {
                if self.st.g0.is_empty() {
                    self.st.g0 = p;
                    return Ok(());
                }
                let (u0, u0p) = (*self.st.g0.last().unwrap(), self.st.g0[0]);
                let (x, y) = (p[0], *p.last().unwrap());
                if self.select(x, u0, "p4/glue/case3/xu0")? == Blue {
                    self.st.g0.extend(p);
                    return Ok(());
                }
                let g0 = std::mem::take(&mut self.st.g0);
                if y == x && u0 == u0p {
                    return Err(invariant("case 3 glue of two single vertices".into()));
                }
                let next = if self.select(y, u0p, "p4/glue/case3/yu0'")? == Blue {
                    Piece::OneOne(cat(&[&rev(&g0), &rev(&p)]))
                } else if p.len() > 1 {
                    self.force(y, u0, "p4/glue/case3/yu0")?;
                    Piece::OneOne(cat(&[&p, &rev(&g0)]))
                } else {
                    Piece::Extended(ExtendedPathCert::new(g0, x))
                };
                self.glue(next)?;
            }
        }
        Ok(())
    }

    /// One round of growth: five new essential vertices, result very good.
    fn grow_by_5(&mut self) -> Result<(), Halt> {
        let (mut a, b, mut c) = (self.fresh(), self.fresh(), self.fresh());
        let ab = self.select(a, b, "p4/stage1/probe")?;
        let bc = self.select(b, c, "p4/stage1/probe")?;
        let piece = match (ab, bc) {
            (Red, Red) => {
                let (x, y) = (self.fresh(), self.fresh());
                self.force(a, x, "p4/stage1/good-case1/ax")?;
                self.force(c, y, "p4/stage1/good-case1/cy")?;
                self.force(x, c, "p4/stage1/good-case1/xc")?;
                Some(Piece::Extended(ExtendedPathCert::new(vec![y, c, x, a], b)))
            }
            (Blue, Blue) => {
                let (x, y) = (self.fresh(), self.fresh());
                let cx = self.select(c, x, "p4/stage1/good-case2/cx")?;
                let xy = self.select(x, y, "p4/stage1/good-case2/xy")?;
                match (cx, xy) {
                    (Blue, Blue) => Some(Piece::Plain(vec![a, b, c, x, y])),
                    (Red, Red) => {
                        self.force(a, y, "p4/stage1/good-case2/ay")?;
                        Some(Piece::Extended(ExtendedPathCert::new(vec![c, b, a, y], x)))
                    }
                    (Red, Blue) => {
                        if self.select(a, y, "p4/stage1/good-case2/ay")? == Blue {
                            Some(Piece::OneOne(vec![c, b, a, y, x]))
                        } else {
                            self.force(c, y, "p4/stage1/good-case2/cy")?;
                            Some(Piece::OneOne(vec![a, b, c, y, x]))
                        }
                    }
                    (Blue, Red) => {
                        if self.select(a, y, "p4/stage1/good-case2/ay")? == Blue {
                            Some(Piece::OneOne(vec![y, a, b, c, x]))
                        } else {
                            Some(Piece::Extended(ExtendedPathCert::new(vec![a, b, c, x], y)))
                        }
                    }
                }
            }
            _ => {
                if ab == Red {
                    std::mem::swap(&mut a, &mut c);
                }
                match self.st.limb {
                    None => self.grow_mixed_no_limb(a, b, c)?,
                    Some(limb) => self.grow_mixed_with_limb(a, b, c, limb)?,
                }
            }
        };
        if let Some(p) = piece {
            self.glue(p)?;
        }
        Ok(())
    }

    /// `ab` blue, `bc` red, no limb yet.
    fn grow_mixed_no_limb(&mut self, a: VertexId, b: VertexId, c: VertexId) -> Result<Option<Piece>, Halt> {
        let x = self.fresh();
        if self.select(c, x, "p4/stage1/good-case3/cx")? == Red {
            let y = self.fresh();
            self.force(x, y, "p4/stage1/good-case3/xy")?;
            self.force(a, x, "p4/stage1/good-case3/ax")?;
            return Ok(Some(Piece::Extended(ExtendedPathCert::new(vec![y, x, a, b], c))));
        }
        let y = self.fresh();
        if self.select(b, y, "p4/stage1/good-case3/by")? == Blue {
            self.st.limb = Some(LimbCert::new(a, b, c, x, y));
            return Ok(None);
        }
        self.force(a, c, "p4/stage1/good-case3/ac")?;
        self.force(x, y, "p4/stage1/good-case3/xy")?;
        Ok(Some(Piece::OneOne(vec![y, x, c, a, b])))
    }

    /// `ab` blue, `bc` red, a limb already on the board.
    fn grow_mixed_with_limb(
        &mut self,
        a: VertexId,
        b: VertexId,
        c: VertexId,
        limb: LimbCert,
    ) -> Result<Option<Piece>, Halt> {
        let (x, y) = (self.fresh(), self.fresh());
        if self.select(x, y, "p4/stage1/good-case3/xy")? == Blue {
            if self.select(c, x, "p4/stage1/good-case3/cx")? == Red {
                self.force(a, x, "p4/stage1/good-case3/ax")?;
                return Ok(Some(Piece::Extended(ExtendedPathCert::new(vec![y, x, a, b], c))));
            }
            if self.select(y, a, "p4/stage1/good-case3/ya")? == Blue {
                return Ok(Some(Piece::OneOne(vec![b, a, y, x, c])));
            }
            self.force(c, a, "p4/stage1/good-case3/ca")?;
            return Ok(Some(Piece::OneOne(vec![b, a, c, x, y])));
        }
        if self.select(a, x, "p4/stage1/good-case3/ax")? == Blue {
            self.force(b, y, "p4/stage1/good-case3/by")?;
            self.force(c, y, "p4/stage1/good-case3/cy")?;
            return Ok(Some(Piece::OneOne(vec![x, a, b, y, c])));
        }
        let [w1, u1, u2, w3, w2] = limb.x;
        self.force(y, w1, "p4/stage1/good-case3/limb-yw1")?;
        self.force(y, w3, "p4/stage1/good-case3/limb-yw3")?;
        self.force(c, u2, "p4/stage1/good-case3/limb-cu2")?;
        self.force(c, x, "p4/stage1/good-case3/limb-cx")?;
        self.force(a, w2, "p4/stage1/good-case3/limb-aw2")?;
        self.st.limb = None;
        Ok(Some(Piece::OneOne(vec![b, a, w2, u1, w1, y, w3, u2, c, x])))
    }

    /// Builds and glues the `r`-vertex remainder. Returns the red edge of the
    /// exceptional case instead of gluing it.
    fn remainder(&mut self, r: usize) -> Result<Option<(VertexId, VertexId)>, Halt> {
        let piece = match r {
            0 => return Ok(None),
            1 => Piece::Plain(vec![self.fresh()]),
            2 => {
                let (a, b) = (self.fresh(), self.fresh());
                if self.select(a, b, "p4/stage2/case1")? == Red {
                    return Ok(Some((a, b)));
                }
                Piece::Plain(vec![a, b])
            }
            3 => {
                let (mut a, b, mut c) = (self.fresh(), self.fresh(), self.fresh());
                let ab = self.select(a, b, "p4/stage2/probe")?;
                let bc = self.select(b, c, "p4/stage2/probe")?;
                match (ab, bc) {
                    (Blue, Blue) => Piece::Plain(vec![a, b, c]),
                    (Red, Red) => {
                        let x = self.fresh();
                        self.force(a, x, "p4/stage2/case2/ax")?;
                        self.force(x, c, "p4/stage2/case2/xc")?;
                        Piece::OneOne(vec![a, x, c])
                    }
                    _ => {
                        if ab == Red {
                            std::mem::swap(&mut a, &mut c);
                        }
                        if self.select(a, c, "p4/stage2/case3/ac")? == Blue {
                            Piece::OneOne(vec![c, a, b])
                        } else {
                            Piece::Extended(ExtendedPathCert::new(vec![a, b], c))
                        }
                    }
                }
            }
            4 => self.remainder4()?,
            _ => return Err(invariant(format!("remainder {r} out of range"))),
        };
        self.glue(piece)?;
        Ok(None)
    }

    fn remainder4(&mut self) -> Result<Piece, Halt> {
        let v: [VertexId; 4] = [self.fresh(), self.fresh(), self.fresh(), self.fresh()];
        let mut red = [false; 4];
        for i in 0..3 {
            red[i] = self.select(v[i], v[i + 1], "p4/stage2/probe")? == Red;
        }
        if !red.contains(&true) {
            return Ok(Piece::Plain(v.to_vec()));
        }
        red[3] = self.select(v[3], v[0], "p4/stage2/case4/da")? == Red;
        let at = |i: usize| v[i % 4];
        let reds: Vec<usize> = (0..4).filter(|&i| red[i]).collect();
        match *reds.as_slice() {
            [i] => Ok(Piece::OneOne(vec![at(i + 1), at(i + 2), at(i + 3), at(i)])),
            [i, j] if j == i + 1 || (i == 0 && j == 3) => {
                // reds e_s, e_{s+1} sharing v_{s+1}
                let s = if j == i + 1 { i } else { 3 };
                Ok(Piece::Extended(ExtendedPathCert::new(vec![at(s + 2), at(s + 3), at(s)], at(s + 1))))
            }
            [0, 2] => {
                self.force(v[0], v[2], "p4/stage2/case4/ac")?;
                Ok(Piece::OneOne(vec![v[1], v[2], v[0], v[3]]))
            }
            [1, 3] => {
                self.force(v[0], v[2], "p4/stage2/case4/ac")?;
                Ok(Piece::OneOne(vec![v[1], v[0], v[2], v[3]]))
            }
            _ => Err(invariant(format!("remainder 4-cycle with red pattern {red:?}"))),
        }
    }

    /// Turns the limb into a blue (1,0)-path whose front is the 1-end.
    fn convert_limb(&mut self) -> Result<Option<Vec<VertexId>>, Halt> {
        let Some(l) = self.st.limb.take() else {
            return Ok(None);
        };
        let [x1, x2, x3, x4, x5] = l.x;
        if self.select(x4, x5, "p4/stage3/limb-x4x5")? == Blue {
            return Ok(Some(vec![x3, x4, x5, x2, x1]));
        }
        self.force(x5, x3, "p4/stage3/limb-x5x3")?;
        Ok(Some(vec![x4, x3, x5, x2, x1]))
    }

    fn stage3(&mut self) -> Result<(), Halt> {
        let mut f1 = std::mem::take(&mut self.st.g1);
        if let Some(p) = self.convert_limb()? {
            if let Some(&end) = f1.last() {
                self.force(p[0], end, "p4/stage3/f1")?;
                f1.extend(p);
            } else {
                f1 = p;
            }
        }
        // `d` is a blue path whose last vertex is a 1-end, or empty.
        let d = match self.st.g2.take() {
            Some(g2) if !f1.is_empty() => {
                self.force(f1[0], g2.red_end, "p4/stage3/d-f1u2")?;
                self.force(g2.transition, *f1.last().unwrap(), "p4/stage3/d-w2f1")?;
                cat(&[&g2.blue_vertices, &rev(&f1), &[g2.red_end]])
            }
            Some(g2) => return self.stage3_lone_g2(g2),
            None => rev(&f1),
        };
        self.join_g0(d)
    }

    /// `F1` empty, `G2` present.
    fn stage3_lone_g2(&mut self, g2: ExtendedPathCert) -> Result<(), Halt> {
        let g0 = std::mem::take(&mut self.st.g0);
        let w2 = g2.transition;
        if g0.is_empty() {
            let y = self.fresh();
            return self.force(w2, y, "p4/stage3/g2-fresh");
        }
        let (u0, u0p) = (*g0.last().unwrap(), g0[0]);
        self.force(w2, u0, "p4/stage3/g2-w2u0")?;
        if self.select(u0p, g2.red_end, "p4/stage3/g2-u0'u2")? == Red {
            let y = self.fresh();
            self.force(u0p, y, "p4/stage3/g2-u0'fresh")?;
        }
        Ok(())
    }

    fn join_g0(&mut self, d: Vec<VertexId>) -> Result<(), Halt> {
        let g0 = std::mem::take(&mut self.st.g0);
        if d.is_empty() || g0.is_empty() {
            return Ok(());
        }
        let (x, xp) = (*d.last().unwrap(), d[0]);
        let (u0, u0p) = (*g0.last().unwrap(), g0[0]);
        if self.select(x, u0, "p4/stage3/xu0")? == Blue {
            return Ok(());
        }
        let elsewhere = self.a.board().neighbors_in(x, Red).any(|y| y != u0 && y != xp);
        if elsewhere {
            self.force(u0, xp, "p4/stage3/u0x'")
        } else if u0p != u0 {
            self.force(xp, u0p, "p4/stage3/x'u0'")
        } else {
            let y = self.fresh();
            self.force(xp, y, "p4/stage3/x'fresh")
        }
    }

    /// Remainder `r = 2` came back as a red edge `ab`.
    fn exceptional(&mut self, a: VertexId, b: VertexId, n: usize) -> Result<(), Halt> {
        if !self.st.g0.is_empty() {
            self.report.exceptional = Some(1);
            let g0 = std::mem::take(&mut self.st.g0);
            let (u0, u0p) = (*g0.last().unwrap(), g0[0]);
            let first = self.select(u0, a, "p4/stage3x/subcase1/u0a")?;
            let second = self.select(u0p, b, "p4/stage3x/subcase1/u0'b")?;
            let piece = match (first, second) {
                (Blue, Blue) => Piece::OneOne(cat(&[&[a], &rev(&g0), &[b]])),
                (Blue, Red) => Piece::Extended(ExtendedPathCert::new(cat(&[&[a], &rev(&g0)]), b)),
                (Red, Blue) => Piece::Extended(ExtendedPathCert::new(cat(&[&[b], &g0]), a)),
                (Red, Red) => return Err(invariant("both subcase 1 joins came back red".into())),
            };
            self.glue(piece)?;
            self.checkpoint(false, n)?;
            return self.stage3();
        }
        if !self.st.g1.is_empty() {
            self.report.exceptional = Some(2);
            let g1 = std::mem::take(&mut self.st.g1);
            self.force(*g1.last().unwrap(), a, "p4/stage3x/subcase2/u1a")?;
            self.force(g1[0], b, "p4/stage3x/subcase2/u1'b")?;
            self.st.g1 = cat(&[&[b], &g1, &[a]]);
            self.checkpoint(false, n)?;
            return self.stage3();
        }
        self.report.exceptional = Some(3);
        let g2 = self
            .st
            .g2
            .take()
            .ok_or_else(|| invariant("exceptional subcase 3 without G2".into()))?;
        self.force(g2.transition, a, "p4/stage3x/subcase3/w2a")?;
        self.force(a, g2.red_end, "p4/stage3x/subcase3/au2")?;
        self.force(g2.red_end, b, "p4/stage3x/subcase3/u2b")?;
        if let Some(p) = self.convert_limb()? {
            self.force(p[0], b, "p4/stage3x/subcase3/limb")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::play_strategy;
    use crate::painters::{AllBlue, Heuristic, RedGreedy, UniformRandom};

    fn run(n: usize, painter: &mut dyn crate::game::PainterPolicy) -> (crate::game::Played, P4Report) {
        let mut b = P4Builder::new(n).unwrap().lenient();
        let cfg = b.config();
        let played = play_strategy(&mut b, painter, &cfg).unwrap();
        (played, b.report().clone())
    }

    #[test]
    fn bound_values() {
        assert_eq!(p4_bound(10), 13);
        assert_eq!(p4_bound(15), 20);
        assert_eq!(p4_bound(16), 22);
        assert!(P4Builder::new(9).is_err());
    }

    #[test]
    fn all_blue_builds_a_bare_path() {
        let (played, rep) = run(10, &mut AllBlue);
        assert_eq!(played.state.status, Status::BlueWin);
        assert_eq!(played.state.board.count(Blue), 9);
        assert_eq!(played.state.board.count(Red), 0);
        assert!(played.transcript.rounds <= 13);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn sampled_painters_stay_within_bound() {
        for n in [10, 11, 12, 13, 14, 19, 26, 33] {
            let mut painters: Vec<Box<dyn crate::game::PainterPolicy>> =
                vec![Box::new(AllBlue), Box::new(RedGreedy), Box::new(Heuristic::default())];
            painters.extend((0..40).map(|s| Box::new(UniformRandom::new(s)) as Box<dyn crate::game::PainterPolicy>));
            for (i, p) in painters.iter_mut().enumerate() {
                let (played, rep) = run(n, p.as_mut());
                assert!(played.failure.is_none(), "n={n} painter {i}: {:?}", played.failure);
                assert_eq!(played.state.status, Status::BlueWin, "n={n} painter {i}");
                assert!(played.transcript.rounds <= p4_bound(n), "n={n} painter {i}");
                assert!(rep.violations.is_empty(), "n={n} painter {i}: {:?}", rep.violations);
            }
        }
    }
}
