//! Two-colored simple graphs over an unbounded, lazily allocated vertex universe.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the size of a cyclic monochromatic component searched exhaustively.
pub const DEFAULT_COMPONENT_GUARD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn code(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    fn slot(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// A colored edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub color: Color,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId, color: Color) -> Edge {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, color }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoardError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} is already colored")]
    DuplicateEdge(VertexId, VertexId),
    #[error("{color} component of vertex {vertex} has {size} vertices, above the search guard {guard}")]
    ComponentTooLarge {
        vertex: VertexId,
        color: Color,
        size: usize,
        guard: usize,
    },
}

/// Monochromatic component descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertex set.
    pub vertices: Vec<VertexId>,
    /// The vertices in path order when the component is a path, starting from the smaller end.
    pub path: Option<Vec<VertexId>>,
}

impl Component {
    pub fn is_path(&self) -> bool {
        self.path.is_some()
    }

    pub fn ends(&self) -> Option<(VertexId, VertexId)> {
        self.path
            .as_ref()
            .map(|p| (p[0], *p.last().expect("components are nonempty")))
    }
}

#[derive(Clone, Debug, Default)]
struct Forest {
    parent: Vec<u32>,
    size: Vec<u32>,
    edges: Vec<u32>,
}

impl Forest {
    fn grow(&mut self, len: usize) {
        while self.parent.len() < len {
            let i = self.parent.len() as u32;
            self.parent.push(i);
            self.size.push(1);
            self.edges.push(0);
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.edges[ra] += 1;
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.edges[ra] += self.edges[rb] + 1;
    }
}

/// The host graph of a game.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    adj: Vec<Vec<(VertexId, Color)>>,
    edges: Vec<Edge>,
    counts: [usize; 2],
    next_free: u32,
    forests: [Forest; 2],
    guard: usize,
}

impl Default for ColoredGraph {
    fn default() -> Self {
        ColoredGraph::new()
    }
}

impl PartialEq for ColoredGraph {
    /// Equality as colored edge sets.
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.edges.clone();
        let mut b = other.edges.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for ColoredGraph {}

impl ColoredGraph {
    pub fn new() -> Self {
        ColoredGraph {
            adj: Vec::new(),
            edges: Vec::new(),
            counts: [0, 0],
            next_free: 0,
            forests: [Forest::default(), Forest::default()],
            guard: DEFAULT_COMPONENT_GUARD,
        }
    }

    pub fn with_guard(guard: usize) -> Self {
        ColoredGraph {
            guard,
            ..ColoredGraph::new()
        }
    }

    pub fn from_edges<I>(edges: I) -> Result<Self, BoardError>
    where
        I: IntoIterator<Item = (u32, u32, Color)>,
    {
        let mut g = ColoredGraph::new();
        for (u, v, c) in edges {
            g.add_edge(VertexId(u), VertexId(v), c)?;
        }
        Ok(g)
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn set_guard(&mut self, guard: usize) {
        self.guard = guard;
    }

    /// Returns a vertex that was never touched and never handed out before.
    pub fn allocate_free_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_free);
        self.next_free += 1;
        v
    }

    /// One past the largest id ever allocated or touched.
    pub fn vertex_bound(&self) -> usize {
        self.next_free as usize
    }

    fn ensure(&mut self, v: VertexId) {
        let len = v.index() + 1;
        if self.adj.len() < len {
            self.adj.resize_with(len, Vec::new);
            for f in &mut self.forests {
                f.grow(len);
            }
        }
        if v.0 >= self.next_free {
            self.next_free = v.0 + 1;
        }
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, color: Color) -> Result<(), BoardError> {
        if u == v {
            return Err(BoardError::SelfLoop(u));
        }
        if self.color(u, v).is_some() {
            let e = Edge::new(u, v, color);
            return Err(BoardError::DuplicateEdge(e.u, e.v));
        }
        self.ensure(u);
        self.ensure(v);
        self.adj[u.index()].push((v, color));
        self.adj[v.index()].push((u, color));
        self.edges.push(Edge::new(u, v, color));
        self.counts[color.slot()] += 1;
        self.forests[color.slot()].union(u.index(), v.index());
        Ok(())
    }

    pub fn color(&self, u: VertexId, v: VertexId) -> Option<Color> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj
            .get(a.index())?
            .iter()
            .find(|(w, _)| *w == b)
            .map(|&(_, c)| c)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(v.index()).map_or(0, Vec::len)
    }

    pub fn degree_in(&self, v: VertexId, color: Color) -> usize {
        self.neighbors_in(v, color).count()
    }

    /// True iff `v` is an endpoint of some colored edge.
    pub fn touches(&self, v: VertexId) -> bool {
        self.degree(v) > 0
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, Color)] {
        self.adj.get(v.index()).map_or(&[], Vec::as_slice)
    }

    pub fn neighbors_in(&self, v: VertexId, color: Color) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors(v)
            .iter()
            .filter(move |(_, c)| *c == color)
            .map(|&(w, _)| w)
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count(&self, color: Color) -> usize {
        self.counts[color.slot()]
    }

    /// All touched vertices, sorted.
    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.adj.len())
            .filter(|&i| !self.adj[i].is_empty())
            .map(|i| VertexId(i as u32))
            .collect()
    }

    /// Number of vertices in the `color` component of `v` (1 when `v` has no such edge).
    pub fn component_size(&self, color: Color, v: VertexId) -> usize {
        if v.index() >= self.adj.len() {
            return 1;
        }
        let f = &self.forests[color.slot()];
        f.size[f.find(v.index())] as usize
    }

    fn component_is_tree(&self, color: Color, v: VertexId) -> bool {
        if v.index() >= self.adj.len() {
            return true;
        }
        let f = &self.forests[color.slot()];
        let r = f.find(v.index());
        f.edges[r] + 1 == f.size[r]
    }

    pub fn same_component(&self, color: Color, u: VertexId, v: VertexId) -> bool {
        if u == v {
            return true;
        }
        if u.index() >= self.adj.len() || v.index() >= self.adj.len() {
            return false;
        }
        let f = &self.forests[color.slot()];
        f.find(u.index()) == f.find(v.index())
    }

    fn check_guard(&self, color: Color, v: VertexId) -> Result<(), BoardError> {
        let size = self.component_size(color, v);
        if size > self.guard {
            return Err(BoardError::ComponentTooLarge {
                vertex: v,
                color,
                size,
                guard: self.guard,
            });
        }
        Ok(())
    }

    /// Farthest BFS layer from `x` inside a tree component, never entering `blocked`.
    fn tree_eccentricity(&self, color: Color, x: VertexId, blocked: Option<VertexId>) -> (usize, VertexId) {
        let mut queue = VecDeque::new();
        queue.push_back((x, None::<VertexId>, 1usize));
        let mut best = (1, x);
        while let Some((w, from, d)) = queue.pop_front() {
            if d > best.0 {
                best = (d, w);
            }
            for y in self.neighbors_in(w, color) {
                if Some(y) != from && Some(y) != blocked {
                    queue.push_back((y, Some(w), d + 1));
                }
            }
        }
        best
    }

    fn dfs_longest(&self, color: Color, x: VertexId, visited: &mut [bool], cap: usize) -> usize {
        if cap <= 1 {
            return 1;
        }
        let mut best = 1;
        for &(y, c) in self.neighbors(x) {
            if c != color || visited[y.index()] {
                continue;
            }
            visited[y.index()] = true;
            best = best.max(1 + self.dfs_longest(color, y, visited, cap - 1));
            visited[y.index()] = false;
            if best >= cap {
                break;
            }
        }
        best
    }

    fn scratch(&self) -> Vec<bool> {
        vec![false; self.adj.len().max(1)]
    }

    /// Vertex count of the longest `color` path ending at `x` and avoiding `excluding`.
    pub fn longest_path_from(
        &self,
        color: Color,
        x: VertexId,
        excluding: Option<VertexId>,
    ) -> Result<usize, BoardError> {
        if self.degree_in(x, color) == 0 {
            return Ok(1);
        }
        if self.component_is_tree(color, x) {
            return Ok(self.tree_eccentricity(color, x, excluding).0);
        }
        self.check_guard(color, x)?;
        Ok(self.longest_from_capped(color, x, excluding, usize::MAX))
    }

    fn longest_from_capped(&self, color: Color, x: VertexId, excluding: Option<VertexId>, cap: usize) -> usize {
        let mut visited = self.scratch();
        if let Some(e) = excluding {
            if e.index() < visited.len() {
                visited[e.index()] = true;
            }
        }
        if x.index() >= visited.len() {
            return 1;
        }
        visited[x.index()] = true;
        self.dfs_longest(color, x, &mut visited, cap)
    }

    /// Vertex count of the longest simple path in `color ∪ {uv}` that traverses `uv`.
    pub fn longest_path_through(&self, color: Color, u: VertexId, v: VertexId) -> Result<usize, BoardError> {
        if !self.same_component(color, u, v) {
            return Ok(self.longest_path_from(color, u, None)? + self.longest_path_from(color, v, None)?);
        }
        self.check_guard(color, u)?;
        Ok(self.through_capped(color, u, v, usize::MAX))
    }

    /// `min(longest_path_through(color, u, v), cap)`, searching only as deep as `cap` requires.
    pub fn longest_path_through_capped(&self, color: Color, u: VertexId, v: VertexId, cap: usize) -> usize {
        if !self.same_component(color, u, v) {
            let a = self.longest_from_capped(color, u, None, cap);
            let b = self.longest_from_capped(color, v, None, cap);
            return (a + b).min(cap);
        }
        self.through_capped(color, u, v, cap)
    }

    fn through_capped(&self, color: Color, u: VertexId, v: VertexId, cap: usize) -> usize {
        let mut visited = self.scratch();
        visited[u.index()] = true;
        visited[v.index()] = true;
        let mut best = 0;
        self.through_walk(color, u, v, 1, &mut visited, cap, &mut best);
        best.min(cap)
    }

    // Enumerates the u-side of the path; for each prefix, extends the v-side as far as possible.
    #[allow(clippy::too_many_arguments)]
    fn through_walk(
        &self,
        color: Color,
        end: VertexId,
        v: VertexId,
        len: usize,
        visited: &mut [bool],
        cap: usize,
        best: &mut usize,
    ) {
        if *best >= cap {
            return;
        }
        let rest = self.dfs_longest(color, v, visited, cap.saturating_sub(len));
        *best = (*best).max(len + rest);
        for &(y, c) in self.neighbors(end) {
            if c != color || visited[y.index()] {
                continue;
            }
            visited[y.index()] = true;
            self.through_walk(color, y, v, len + 1, visited, cap, best);
            visited[y.index()] = false;
            if *best >= cap {
                return;
            }
        }
    }

    /// Vertex count of the longest `color` path inside the component of `v`.
    pub fn longest_path_in_component(&self, color: Color, v: VertexId) -> Result<usize, BoardError> {
        if self.degree_in(v, color) == 0 {
            return Ok(1);
        }
        if self.component_is_tree(color, v) {
            let (_, far) = self.tree_eccentricity(color, v, None);
            return Ok(self.tree_eccentricity(color, far, None).0);
        }
        self.check_guard(color, v)?;
        let comp = self.component_of(color, v);
        let mut best = 0;
        for &x in &comp {
            best = best.max(self.longest_from_capped(color, x, None, usize::MAX));
            if best == comp.len() {
                break;
            }
        }
        Ok(best)
    }

    /// Vertex count of the longest `color` path in the whole graph (1 for an edgeless color class).
    pub fn longest_path(&self, color: Color) -> Result<usize, BoardError> {
        let mut best = 1;
        for comp in self.components(color) {
            best = best.max(self.longest_path_in_component(color, comp.vertices[0])?);
        }
        Ok(best)
    }

    /// True iff the `color` subgraph contains a path on `n` vertices.
    pub fn has_path(&self, color: Color, n: usize) -> Result<bool, BoardError> {
        if n <= 1 {
            return Ok(true);
        }
        for comp in self.components(color) {
            if comp.vertices.len() >= n && self.longest_path_in_component(color, comp.vertices[0])? >= n {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn component_of(&self, color: Color, v: VertexId) -> Vec<VertexId> {
        let mut seen = self.scratch();
        let mut out = vec![v];
        seen[v.index()] = true;
        let mut i = 0;
        while i < out.len() {
            let w = out[i];
            for y in self.neighbors_in(w, color) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// Partition of the `color`-incident vertices into `color` components, ordered by smallest vertex.
    pub fn components(&self, color: Color) -> Vec<Component> {
        let mut seen = self.scratch();
        let mut out = Vec::new();
        for i in 0..self.adj.len() {
            let v = VertexId(i as u32);
            if seen[i] || self.degree_in(v, color) == 0 {
                continue;
            }
            let mut vertices = self.component_of(color, v);
            for w in &vertices {
                seen[w.index()] = true;
            }
            vertices.sort();
            let path = self.path_order(color, &vertices);
            out.push(Component { vertices, path });
        }
        out
    }

    fn path_order(&self, color: Color, vertices: &[VertexId]) -> Option<Vec<VertexId>> {
        if !self.component_is_tree(color, vertices[0]) {
            return None;
        }
        if vertices.iter().any(|&w| self.degree_in(w, color) > 2) {
            return None;
        }
        let start = *vertices.iter().find(|&&w| self.degree_in(w, color) <= 1)?;
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = self.neighbors_in(cur, color).find(|&y| Some(y) != prev);
            match next {
                Some(y) => {
                    order.push(y);
                    prev = Some(cur);
                    cur = y;
                }
                None => break,
            }
        }
        Some(order)
    }

    /// Copy with every edge touching `removed` dropped; the id allocator is preserved.
    pub fn without_vertices(&self, removed: &[VertexId]) -> ColoredGraph {
        let mut g = ColoredGraph::with_guard(self.guard);
        if let Some(last) = self.adj.len().checked_sub(1) {
            g.ensure(VertexId(last as u32));
        }
        for e in &self.edges {
            if !removed.contains(&e.u) && !removed.contains(&e.v) {
                g.add_edge(e.u, e.v, e.color).expect("subgraph of a simple graph is simple");
            }
        }
        g.next_free = g.next_free.max(self.next_free);
        g
    }

    pub fn longest_red_path_through(&self, u: VertexId, v: VertexId) -> Result<usize, BoardError> {
        self.longest_path_through(Color::Red, u, v)
    }

    pub fn longest_red_path_from(&self, x: VertexId, excluding: Option<VertexId>) -> Result<usize, BoardError> {
        self.longest_path_from(Color::Red, x, excluding)
    }

    pub fn has_blue_path(&self, n: usize) -> Result<bool, BoardError> {
        self.has_path(Color::Blue, n)
    }

    pub fn blue_components(&self) -> Vec<Component> {
        self.components(Color::Blue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn graph(edges: &[(u32, u32, Color)]) -> ColoredGraph {
        ColoredGraph::from_edges(edges.iter().copied()).unwrap()
    }

    use Color::{Blue as B, Red as R};

    #[test]
    fn allocation_is_monotone_and_fresh() {
        let mut g = ColoredGraph::new();
        assert_eq!(g.allocate_free_vertex(), v(0));
        let mut g2 = graph(&[(0, 1, B), (1, 2, R)]);
        assert_eq!(g2.allocate_free_vertex(), v(3));
        let ids: Vec<_> = (0..10).map(|_| g.allocate_free_vertex()).collect();
        assert_eq!(ids, (1..11).map(v).collect::<Vec<_>>());
        assert!(ids.iter().all(|&x| !g.touches(x)));
    }

    #[test]
    fn add_edge_errors() {
        let mut g = ColoredGraph::new();
        g.add_edge(v(0), v(1), B).unwrap();
        assert_eq!(g.count(B), 1);
        assert_eq!(g.add_edge(v(1), v(0), R), Err(BoardError::DuplicateEdge(v(0), v(1))));
        assert_eq!(g.add_edge(v(0), v(0), B), Err(BoardError::SelfLoop(v(0))));
        assert_eq!(g.color(v(1), v(0)), Some(B));
    }

    #[test]
    fn red_path_through_examples() {
        let g = graph(&[(0, 1, R)]);
        assert_eq!(g.longest_red_path_through(v(1), v(2)).unwrap(), 3);
        let g = graph(&[(0, 1, R), (2, 3, R)]);
        assert_eq!(g.longest_red_path_through(v(1), v(2)).unwrap(), 4);
        let g = ColoredGraph::new();
        assert_eq!(g.longest_red_path_through(v(5), v(9)).unwrap(), 2);
    }

    #[test]
    fn red_path_from_examples() {
        let g = graph(&[(0, 1, R), (1, 2, R)]);
        assert_eq!(g.longest_red_path_from(v(2), Some(v(7))).unwrap(), 3);
        assert_eq!(g.longest_red_path_from(v(9), None).unwrap(), 1);
        let star = graph(&[(0, 1, R), (0, 2, R), (0, 3, R)]);
        assert_eq!(star.longest_red_path_from(v(1), None).unwrap(), 3);
        assert_eq!(star.longest_red_path_from(v(1), Some(v(0))).unwrap(), 1);
    }

    #[test]
    fn blue_path_examples() {
        let g = graph(&[(0, 1, R)]);
        assert!(g.has_blue_path(1).unwrap());
        let p5 = graph(&[(0, 1, B), (1, 2, B), (2, 3, B), (3, 4, B)]);
        assert!(p5.has_blue_path(5).unwrap());
        assert!(!p5.has_blue_path(6).unwrap());
        let c4 = graph(&[(0, 1, B), (1, 2, B), (2, 3, B), (3, 0, B)]);
        assert!(c4.has_blue_path(4).unwrap());
        assert!(!c4.has_blue_path(5).unwrap());
    }

    #[test]
    fn component_examples() {
        let g = graph(&[(0, 1, B), (1, 2, B), (5, 4, B), (4, 3, B)]);
        let comps = g.blue_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(Component::is_path));
        assert_eq!(comps[1].path.as_deref(), Some(&[v(3), v(4), v(5)][..]));
        assert!(ColoredGraph::new().blue_components().is_empty());
        let tri = graph(&[(0, 1, B), (1, 2, B), (0, 2, B)]);
        let comps = tri.blue_components();
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].is_path());
    }

    #[test]
    fn guard_trips_on_large_cyclic_component() {
        let mut g = ColoredGraph::with_guard(4);
        for i in 0..5 {
            g.add_edge(v(i), v((i + 1) % 5), R).unwrap();
        }
        assert!(matches!(
            g.longest_red_path_from(v(0), None),
            Err(BoardError::ComponentTooLarge { size: 5, .. })
        ));
        // capped queries stay available
        assert_eq!(g.longest_path_through_capped(R, v(0), v(2), 4), 4);
        let mut tree = ColoredGraph::with_guard(4);
        for i in 0..10 {
            tree.add_edge(v(i), v(i + 1), B).unwrap();
        }
        assert_eq!(tree.longest_path_in_component(B, v(3)).unwrap(), 11);
    }

    #[test]
    fn without_vertices_keeps_allocator() {
        let mut g = graph(&[(0, 1, B), (1, 2, R), (7, 8, B)]);
        let h = g.without_vertices(&[v(1)]);
        assert_eq!(h.edge_count(), 1);
        let mut h2 = h.clone();
        assert_eq!(h2.allocate_free_vertex(), g.allocate_free_vertex());
    }
}
