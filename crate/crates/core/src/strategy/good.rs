//! Essential-subgraph decompositions `(G0, G1, G2, L)` and their conditions (A)-(G).

use rustc_hash::FxHashSet as HashSet;
use std::fmt;

use crate::board::{Color, ColoredGraph, VertexId};
use crate::paths::{is_limb_component, ExtendedPathCert, LimbCert};

/// `ceil(2v/5)`.
pub fn red_allowance(v: usize) -> usize {
    (2 * v).div_ceil(5)
}

/// `ceil(7 ess/5) - 1`, reported as 0 for an empty decomposition.
pub fn edge_budget(ess: usize) -> usize {
    (7 * ess).div_ceil(5).saturating_sub(1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoodGraphState {
    /// Blue path, either orientation; empty when absent.
    pub g0: Vec<VertexId>,
    /// Blue (1,1)-path; empty when absent.
    pub g1: Vec<VertexId>,
    pub g2: Option<ExtendedPathCert>,
    pub limb: Option<LimbCert>,
}

impl GoodGraphState {
    pub fn v12(&self) -> usize {
        self.g1.len() + self.g2.as_ref().map_or(0, ExtendedPathCert::vertex_count)
    }

    pub fn ess(&self) -> usize {
        self.g0.len() + self.v12() + if self.limb.is_some() { 5 } else { 0 }
    }

    pub fn essential_vertices(&self) -> Vec<VertexId> {
        let mut out = self.g0.clone();
        out.extend(&self.g1);
        if let Some(g2) = &self.g2 {
            out.extend(g2.vertices());
        }
        if let Some(l) = &self.limb {
            out.extend(l.x);
        }
        out
    }

    pub fn without_g0(&self) -> Self {
        GoodGraphState {
            g0: Vec::new(),
            ..self.clone()
        }
    }

    pub fn without_limb(&self) -> Self {
        GoodGraphState {
            limb: None,
            ..self.clone()
        }
    }

    /// Red edges with at least one end in `set`.
    fn red_touching(board: &ColoredGraph, set: &HashSet<VertexId>) -> usize {
        board
            .edges()
            .iter()
            .filter(|e| e.color == Color::Red && (set.contains(&e.u) || set.contains(&e.v)))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Essential subgraphs overlap.
    Disjoint,
    A,
    B,
    /// Structure and red count of `G1 ∪ G2`.
    C,
    /// A 1-end of `G1` is adjacent to the transition vertex or red end of `G2`.
    CAdjacentInner,
    /// A 1-end of `G1` is adjacent to the blue end of `G2`.
    CAdjacentBlueEnd,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) {}", self.clause, self.detail)
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn fail(&mut self, clause: Clause, detail: String) {
        self.0.push(Violation { clause, detail });
    }
}

fn blue_path_edges(path: &[VertexId], into: &mut HashSet<(VertexId, VertexId)>) {
    for w in path.windows(2) {
        into.insert(ordered(w[0], w[1]));
    }
}

fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_blue_path(board: &ColoredGraph, path: &[VertexId]) -> bool {
    path.windows(2).all(|w| board.color(w[0], w[1]) == Some(Color::Blue))
}

/// Evaluates (A)-(F) against the raw board. An empty result means good.
pub fn check_good(state: &GoodGraphState, board: &ColoredGraph) -> Vec<Violation> {
    let mut r = Report(Vec::new());
    let ess_list = state.essential_vertices();
    let ess: HashSet<VertexId> = ess_list.iter().copied().collect();
    if ess.len() != ess_list.len() {
        r.fail(Clause::Disjoint, "essential subgraphs share a vertex".into());
    }

    if let Some(l) = &state.limb {
        if !is_limb_component(board, l) {
            r.fail(Clause::A, format!("{:?} is not a limb component", l.x));
        }
    }

    check_g0(state, board, &ess, &mut r);
    check_g12(state, board, &mut r);

    for e in board.edges() {
        if !ess.contains(&e.u) && !ess.contains(&e.v) {
            let clause = if e.color == Color::Blue { Clause::D } else { Clause::E };
            r.fail(clause, format!("{}-{} misses every essential vertex", e.u, e.v));
        }
    }

    if !state.g0.len().is_multiple_of(5) && !state.v12().is_multiple_of(5) {
        r.fail(
            Clause::F,
            format!("v(G0)={} and v(G1∪G2)={} both off multiples of 5", state.g0.len(), state.v12()),
        );
    }
    r.0
}

/// (A)-(G).
pub fn check_very_good(state: &GoodGraphState, board: &ColoredGraph) -> Vec<Violation> {
    let mut v = check_good(state, board);
    if !state.g0.len().is_multiple_of(5) || !state.v12().is_multiple_of(5) {
        v.push(Violation {
            clause: Clause::G,
            detail: format!("v(G0)={} v(G1∪G2)={}", state.g0.len(), state.v12()),
        });
    }
    v
}

fn check_g0(state: &GoodGraphState, board: &ColoredGraph, ess: &HashSet<VertexId>, r: &mut Report) {
    let g0 = &state.g0;
    if g0.is_empty() {
        return;
    }
    if !is_blue_path(board, g0) {
        r.fail(Clause::B, "G0 is not a blue path".into());
        return;
    }
    let members: HashSet<VertexId> = g0.iter().copied().collect();
    let mut path_edges = HashSet::default();
    blue_path_edges(g0, &mut path_edges);
    let mut reds = 0;
    for &x in g0 {
        for &(y, c) in board.neighbors(x) {
            match c {
                Color::Blue if !path_edges.contains(&ordered(x, y)) => {
                    r.fail(Clause::B, format!("stray blue edge {x}-{y} at G0"));
                }
                Color::Red => {
                    if !members.contains(&y) || x < y {
                        reds += 1;
                    }
                    if !members.contains(&y) && ess.contains(&y) {
                        r.fail(Clause::B, format!("G0 is red-adjacent to essential vertex {y}"));
                    }
                    if !members.contains(&y) {
                        // the red neighbor must not reach anything outside G0
                        for &(z, cz) in board.neighbors(y) {
                            if cz != Color::Red || !members.contains(&z) {
                                r.fail(Clause::B, format!("component of G0 leaks through {y}-{z}"));
                            }
                        }
                    }
                }
                Color::Blue => {}
            }
        }
    }
    if reds + 1 > red_allowance(g0.len()) {
        r.fail(
            Clause::B,
            format!("|Red(G0)|={reds} above {}", red_allowance(g0.len()).saturating_sub(1)),
        );
    }
}

fn check_g12(state: &GoodGraphState, board: &ColoredGraph, r: &mut Report) {
    let mut members = HashSet::default();
    let mut path_edges = HashSet::default();
    if let Some(g2) = &state.g2 {
        let ok = g2.blue_vertices.len() >= 2
            && is_blue_path(board, &g2.blue_vertices)
            && g2.blue_end == g2.blue_vertices[0]
            && g2.transition == *g2.blue_vertices.last().unwrap()
            && board.color(g2.transition, g2.red_end) == Some(Color::Red)
            && board.longest_red_path_from(g2.transition, None).is_ok_and(|l| l >= 3);
        if !ok {
            r.fail(Clause::C, "G2 is not an extended (2,0)-path on at least 3 vertices".into());
        }
        members.extend(g2.vertices());
        blue_path_edges(&g2.blue_vertices, &mut path_edges);
    }
    if !state.g1.is_empty() {
        let g1 = &state.g1;
        let ends = [g1[0], *g1.last().unwrap()];
        if !is_blue_path(board, g1) || ends.iter().any(|&e| board.degree_in(e, Color::Red) == 0) {
            r.fail(Clause::C, "G1 is not a blue (1,1)-path".into());
        }
        if let Some(g2) = &state.g2 {
            for &e in &ends {
                for (named, clause) in [
                    (g2.transition, Clause::CAdjacentInner),
                    (g2.red_end, Clause::CAdjacentInner),
                    (g2.blue_end, Clause::CAdjacentBlueEnd),
                ] {
                    if board.color(e, named).is_some() {
                        r.fail(clause, format!("1-end {e} of G1 is adjacent to {named} of G2"));
                    }
                }
            }
        }
        members.extend(g1.iter().copied());
        blue_path_edges(g1, &mut path_edges);
    }
    for &x in &members {
        for y in board.neighbors_in(x, Color::Blue) {
            if !path_edges.contains(&ordered(x, y)) {
                r.fail(Clause::C, format!("stray blue edge {x}-{y} at G1∪G2"));
            }
        }
    }
    let reds = GoodGraphState::red_touching(board, &members);
    if reds > red_allowance(members.len()) {
        r.fail(
            Clause::C,
            format!("|Red(G1∪G2)|={reds} above {}", red_allowance(members.len())),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::{Blue as B, Red as R};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn vs(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().copied().map(v).collect()
    }

    fn graph(edges: &[(u32, u32, Color)]) -> ColoredGraph {
        ColoredGraph::from_edges(edges.iter().copied()).unwrap()
    }

    #[test]
    fn budgets() {
        assert_eq!(edge_budget(10), 13);
        assert_eq!(edge_budget(5), 6);
        assert_eq!(edge_budget(0), 0);
        assert_eq!(red_allowance(5), 2);
        assert_eq!(red_allowance(4), 2);
    }

    #[test]
    fn blue_p5_is_very_good() {
        let g = graph(&[(0, 1, B), (1, 2, B), (2, 3, B), (3, 4, B)]);
        let s = GoodGraphState {
            g0: vs(&[0, 1, 2, 3, 4]),
            ..Default::default()
        };
        assert!(check_very_good(&s, &g).is_empty());
    }

    #[test]
    fn eleven_path_with_two_reds_is_good() {
        let g = graph(&[(0, 1, B), (1, 2, B), (2, 3, B), (3, 4, B), (0, 5, R), (4, 6, R)]);
        let s = GoodGraphState {
            g1: vs(&[0, 1, 2, 3, 4]),
            ..Default::default()
        };
        assert!(check_very_good(&s, &g).is_empty());
    }

    #[test]
    fn g0_red_allowance_boundary() {
        let base = [(0, 1, B), (1, 2, B), (2, 3, B)];
        let s = GoodGraphState {
            g0: vs(&[0, 1, 2, 3]),
            ..Default::default()
        };
        let mut one = base.to_vec();
        one.push((0, 7, R));
        let v1 = check_good(&s, &graph(&one));
        assert!(v1.iter().all(|x| x.clause == Clause::F), "{v1:?}");
        let mut two = one.clone();
        two.push((3, 8, R));
        assert!(check_good(&s, &graph(&two)).iter().any(|x| x.clause == Clause::B));
    }

    #[test]
    fn stray_edges_are_reported() {
        let g = graph(&[(0, 1, B), (1, 2, B), (2, 3, B), (3, 4, B), (8, 9, B)]);
        let s = GoodGraphState {
            g0: vs(&[0, 1, 2, 3, 4]),
            ..Default::default()
        };
        assert_eq!(check_good(&s, &g)[0].clause, Clause::D);
    }

    #[test]
    fn limb_must_be_a_component() {
        let g = graph(&[(1, 2, B), (2, 5, B), (3, 4, B), (2, 3, R), (4, 9, R)]);
        let s = GoodGraphState {
            limb: Some(LimbCert::new(v(1), v(2), v(3), v(4), v(5))),
            ..Default::default()
        };
        assert!(check_good(&s, &g).iter().any(|x| x.clause == Clause::A));
    }
}
