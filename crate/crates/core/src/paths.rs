//! Recognizers for the structured colored paths the P4 strategy keeps on the board.

use std::fmt;

use crate::board::{Color, ColoredGraph, VertexId};

/// A blue path whose ends head red paths of the recorded lengths (in edges).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BluePathCert {
    pub vertices: Vec<VertexId>,
    pub end_red_lengths: (usize, usize),
}

/// Blue path `blue_end .. transition` plus the red edge `transition - red_end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPathCert {
    pub blue_end: VertexId,
    pub transition: VertexId,
    pub red_end: VertexId,
    pub blue_vertices: Vec<VertexId>,
}

impl ExtendedPathCert {
    /// `blue` runs from the blue end to the transition vertex.
    pub fn new(blue: Vec<VertexId>, red_end: VertexId) -> Self {
        ExtendedPathCert {
            blue_end: blue[0],
            transition: *blue.last().expect("blue part is nonempty"),
            red_end,
            blue_vertices: blue,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.blue_vertices.len() + 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.blue_vertices.iter().copied().chain(std::iter::once(self.red_end))
    }
}

/// Blue `x1x2`, `x2x5`, `x3x4`, red `x2x3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimbCert {
    pub x: [VertexId; 5],
}

impl LimbCert {
    pub fn new(x1: VertexId, x2: VertexId, x3: VertexId, x4: VertexId, x5: VertexId) -> Self {
        LimbCert { x: [x1, x2, x3, x4, x5] }
    }

    pub fn blue_edges(&self) -> [(VertexId, VertexId); 3] {
        let x = self.x;
        [(x[0], x[1]), (x[1], x[4]), (x[2], x[3])]
    }

    pub fn red_edge(&self) -> (VertexId, VertexId) {
        (self.x[1], self.x[2])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertFailure {
    Empty,
    TooShort { needed: usize, got: usize },
    RepeatedVertex(VertexId),
    NotBlue(VertexId, VertexId),
    NotRed(VertexId, VertexId),
    EndLacksRedPath { end: VertexId, needed: usize, got: usize },
    SearchGuard(String),
}

impl fmt::Display for CertFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertFailure::Empty => write!(f, "empty vertex list"),
            CertFailure::TooShort { needed, got } => write!(f, "needs {needed} vertices, got {got}"),
            CertFailure::RepeatedVertex(v) => write!(f, "vertex {v} repeats"),
            CertFailure::NotBlue(a, b) => write!(f, "{a}-{b} is not blue"),
            CertFailure::NotRed(a, b) => write!(f, "{a}-{b} is not red"),
            CertFailure::EndLacksRedPath { end, needed, got } => {
                write!(f, "end {end} heads a red path of length {got}, needs {needed}")
            }
            CertFailure::SearchGuard(e) => write!(f, "{e}"),
        }
    }
}

fn check_blue_path(g: &ColoredGraph, vertices: &[VertexId]) -> Result<(), CertFailure> {
    let mut seen = rustc_hash::FxHashSet::default();
    for &v in vertices {
        if !seen.insert(v) {
            return Err(CertFailure::RepeatedVertex(v));
        }
    }
    for w in vertices.windows(2) {
        if g.color(w[0], w[1]) != Some(Color::Blue) {
            return Err(CertFailure::NotBlue(w[0], w[1]));
        }
    }
    Ok(())
}

fn red_length(g: &ColoredGraph, x: VertexId) -> Result<usize, CertFailure> {
    g.longest_red_path_from(x, None)
        .map(|c| c - 1)
        .map_err(|e| CertFailure::SearchGuard(e.to_string()))
}

/// Certifies `vertices` (in path order) as a blue (1,1)-path. The returned
/// certificate lists the path starting from its smaller end.
pub fn certify_11_path(g: &ColoredGraph, vertices: &[VertexId]) -> Result<BluePathCert, CertFailure> {
    if vertices.is_empty() {
        return Err(CertFailure::Empty);
    }
    check_blue_path(g, vertices)?;
    let (a, b) = (vertices[0], *vertices.last().unwrap());
    let la = red_length(g, a)?;
    let lb = red_length(g, b)?;
    for (end, l) in [(a, la), (b, lb)] {
        if l < 1 {
            return Err(CertFailure::EndLacksRedPath { end, needed: 1, got: l });
        }
    }
    let mut vs = vertices.to_vec();
    let mut lengths = (la, lb);
    if b < a {
        vs.reverse();
        lengths = (lb, la);
    }
    Ok(BluePathCert {
        vertices: vs,
        end_red_lengths: lengths,
    })
}

/// Certifies `vertices = u1 .. uk u(k+1)` as an extended (2,0)-path.
pub fn certify_extended20(g: &ColoredGraph, vertices: &[VertexId]) -> Result<ExtendedPathCert, CertFailure> {
    if vertices.len() < 3 {
        return Err(CertFailure::TooShort {
            needed: 3,
            got: vertices.len(),
        });
    }
    let (blue, red_end) = vertices.split_at(vertices.len() - 1);
    let red_end = red_end[0];
    check_blue_path(g, blue)?;
    if blue.contains(&red_end) {
        return Err(CertFailure::RepeatedVertex(red_end));
    }
    let t = *blue.last().unwrap();
    if g.color(t, red_end) != Some(Color::Red) {
        return Err(CertFailure::NotRed(t, red_end));
    }
    let l = red_length(g, t)?;
    if l < 2 {
        return Err(CertFailure::EndLacksRedPath { end: t, needed: 2, got: l });
    }
    Ok(ExtendedPathCert::new(blue.to_vec(), red_end))
}

/// True iff `cert` matches the board and its five vertices form a whole component.
pub fn is_limb_component(g: &ColoredGraph, cert: &LimbCert) -> bool {
    let x = cert.x;
    let degrees = [1, 3, 2, 1, 1];
    if x.iter().zip(degrees).any(|(&v, d)| g.degree(v) != d) {
        return false;
    }
    cert.blue_edges().iter().all(|&(a, b)| g.color(a, b) == Some(Color::Blue))
        && g.color(x[1], x[2]) == Some(Color::Red)
}

/// Every limb component of the board, ordered by the center `x2`; `x1 < x5`.
pub fn find_limb(g: &ColoredGraph) -> Vec<LimbCert> {
    let mut out = Vec::new();
    for x2 in g.vertices() {
        if g.degree(x2) != 3 || g.degree_in(x2, Color::Red) != 1 {
            continue;
        }
        let x3 = g.neighbors_in(x2, Color::Red).next().unwrap();
        let mut leaves: Vec<VertexId> = g.neighbors_in(x2, Color::Blue).collect();
        leaves.sort();
        let Some(x4) = g.neighbors_in(x3, Color::Blue).next() else {
            continue;
        };
        let cert = LimbCert::new(leaves[0], x2, x3, x4, leaves[1]);
        if is_limb_component(g, &cert) {
            out.push(cert);
        }
    }
    out
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

    fn blue_p5() -> Vec<(u32, u32, Color)> {
        vec![(1, 2, B), (2, 3, B), (3, 4, B), (4, 5, B)]
    }

    #[test]
    fn pendant_reds_make_a_11_path() {
        let mut e = blue_p5();
        e.extend([(5, 6, R), (1, 0, R)]);
        let cert = certify_11_path(&graph(&e), &vs(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(cert.vertices, vs(&[1, 2, 3, 4, 5]));
        assert_eq!(cert.end_red_lengths, (1, 1));
    }

    #[test]
    fn chord_red_makes_a_11_path() {
        let mut e = blue_p5();
        e.push((5, 1, R));
        assert!(certify_11_path(&graph(&e), &vs(&[5, 4, 3, 2, 1])).is_ok());
    }

    #[test]
    fn bare_vertex_is_not_a_11_path() {
        assert!(matches!(
            certify_11_path(&ColoredGraph::new(), &vs(&[0])),
            Err(CertFailure::EndLacksRedPath { .. })
        ));
        let g = graph(&[(0, 9, R)]);
        assert!(certify_11_path(&g, &vs(&[0])).is_ok());
    }

    #[test]
    fn extended_path_examples() {
        let mut e = blue_p5();
        e.extend([(5, 6, R), (6, 7, R)]);
        let cert = certify_extended20(&graph(&e), &vs(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!((cert.blue_end, cert.transition, cert.red_end), (v(1), v(5), v(6)));

        let mut e = blue_p5();
        e.extend([(5, 6, R), (6, 3, R)]);
        assert!(certify_extended20(&graph(&e), &vs(&[1, 2, 3, 4, 5, 6])).is_ok());

        let g = graph(&[(1, 2, B), (2, 3, R)]);
        assert!(matches!(
            certify_extended20(&g, &vs(&[1, 2, 3])),
            Err(CertFailure::EndLacksRedPath { needed: 2, .. })
        ));
        assert!(matches!(certify_extended20(&g, &vs(&[1, 2])), Err(CertFailure::TooShort { .. })));
    }

    #[test]
    fn limb_examples() {
        let limb = [(1, 2, B), (2, 5, B), (3, 4, B), (2, 3, R)];
        let g = graph(&limb);
        assert_eq!(find_limb(&g), vec![LimbCert::new(v(1), v(2), v(3), v(4), v(5))]);
        assert!(find_limb(&ColoredGraph::new()).is_empty());
        let all_blue = graph(&[(1, 2, B), (2, 5, B), (3, 4, B), (2, 3, B)]);
        assert!(find_limb(&all_blue).is_empty());
        let mut attached = limb.to_vec();
        attached.push((4, 9, B));
        assert!(find_limb(&graph(&attached)).is_empty());
    }
}
