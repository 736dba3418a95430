//! Exact canonical forms of edge-colored graphs.
//!
//! Each connected component is labeled by color refinement plus
//! individualization, keeping the lexicographically least edge code. The key
//! of the whole graph is the sorted list of component codes, so isolated
//! vertices never matter.

use std::collections::HashMap;

use thiserror::Error;

use crate::board::{Color, ColoredGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("component with {0} vertices or edges exceeds the canonicalization limit of 255")]
    TooLarge(usize),
}

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Rebuilds a graph with vertices `0..` in canonical order.
    pub fn to_graph(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new();
        let b = &self.0;
        let (mut i, mut offset) = (0, 0u32);
        while i < b.len() {
            let (m, e) = (b[i] as u32, b[i + 1] as usize);
            i += 2;
            for _ in 0..e {
                let c = if b[i + 2] == 0 { Color::Red } else { Color::Blue };
                g.add_edge(VertexId(offset + b[i] as u32), VertexId(offset + b[i + 1] as u32), c)
                    .expect("keys decode to simple graphs");
                i += 3;
            }
            offset += m;
        }
        g
    }
}

fn color_code(c: Color) -> u8 {
    match c {
        Color::Red => 0,
        Color::Blue => 1,
    }
}

/// A component with local ids `0..m` and its colored adjacency.
struct Local {
    adj: Vec<Vec<(usize, u8)>>,
}

impl Local {
    fn m(&self) -> usize {
        self.adj.len()
    }

    /// Refines `colors` to the coarsest equitable partition, ranks ordered by signature.
    fn refine(&self, colors: &mut [u32]) {
        let mut classes = distinct(colors);
        loop {
            let sigs: Vec<(u32, Vec<(u8, u32)>)> = (0..self.m())
                .map(|v| {
                    let mut s: Vec<(u8, u32)> = self.adj[v].iter().map(|&(w, c)| (c, colors[w])).collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let mut order: Vec<usize> = (0..self.m()).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut rank = 0u32;
            for (i, &v) in order.iter().enumerate() {
                if i > 0 && sigs[order[i - 1]] != sigs[v] {
                    rank += 1;
                }
                colors[v] = rank;
            }
            let now = rank as usize + 1;
            if now == classes {
                return;
            }
            classes = now;
        }
    }

    fn code(&self, labels: &[u32]) -> Vec<u8> {
        let mut edges: Vec<(u8, u8, u8)> = Vec::new();
        for v in 0..self.m() {
            for &(w, c) in &self.adj[v] {
                let (a, b) = (labels[v] as u8, labels[w] as u8);
                if a < b {
                    edges.push((a, b, c));
                }
            }
        }
        edges.sort_unstable();
        let mut out = Vec::with_capacity(2 + 3 * edges.len());
        out.push(self.m() as u8);
        out.push(edges.len() as u8);
        for (a, b, c) in edges {
            out.extend([a, b, c]);
        }
        out
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
        let m = self.m();
        if distinct(&colors) == m {
            let code = self.code(&colors);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        // first non-singleton cell, by rank
        let mut count = vec![0usize; m];
        for &c in &colors {
            count[c as usize] += 1;
        }
        let cell = (0..m).find(|&c| count[c] > 1).expect("some cell has two vertices") as u32;
        for v in (0..m).filter(|&v| colors[v] == cell) {
            let mut next: Vec<u32> = colors.iter().enumerate().map(|(x, &c)| 2 * c + u32::from(x != v)).collect();
            self.refine(&mut next);
            self.search(next, best);
        }
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Canonical key of `g`; isolated vertices are ignored.
pub fn canonicalize(g: &ColoredGraph) -> Result<CanonicalKey, CanonError> {
    let mut codes = Vec::new();
    for comp in components(g) {
        let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
        if comp.len() > 255 || edges > 255 {
            return Err(CanonError::TooLarge(comp.len().max(edges)));
        }
        let index: HashMap<VertexId, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = comp
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|&(w, c)| (index[&w], color_code(c))).collect())
            .collect();
        let local = Local { adj };
        let mut colors: Vec<u32> = local
            .adj
            .iter()
            .map(|a| {
                let red = a.iter().filter(|x| x.1 == 0).count() as u32;
                (a.len() as u32 - red) * 1024 + red
            })
            .collect();
        local.refine(&mut colors);
        let mut best = None;
        local.search(colors, &mut best);
        codes.push(best.expect("search reaches a discrete partition"));
    }
    codes.sort_unstable();
    Ok(CanonicalKey(codes.concat()))
}

/// Connected components of the union of both colors, isolated vertices dropped.
fn components(g: &ColoredGraph) -> Vec<Vec<VertexId>> {
    let vs = g.vertices();
    let mut seen = vec![false; vs.last().map_or(0, |v| v.index() + 1)];
    let mut out = Vec::new();
    for v in vs {
        if seen[v.index()] || g.degree(v) == 0 {
            continue;
        }
        seen[v.index()] = true;
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            for &(w, _) in g.neighbors(comp[i]) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::{Blue as B, Red as R};

    fn key(edges: &[(u32, u32, Color)]) -> CanonicalKey {
        canonicalize(&ColoredGraph::from_edges(edges.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(key(&[(0, 1, B), (1, 2, B)]), key(&[(7, 9, B), (9, 4, B)]));
        assert_ne!(key(&[(0, 1, B), (1, 2, B)]), key(&[(0, 1, R), (1, 2, R)]));
        assert_eq!(key(&[(0, 1, B), (1, 2, R), (2, 3, R)]), key(&[(0, 1, R), (1, 2, R), (2, 3, B)]));
        assert_ne!(key(&[(0, 1, B), (1, 2, R), (2, 3, R)]), key(&[(0, 1, R), (1, 2, B), (2, 3, R)]));
        assert_eq!(key(&[]), canonicalize(&ColoredGraph::new()).unwrap());
    }

    #[test]
    fn components_are_order_free() {
        let a = key(&[(0, 1, B), (2, 3, R), (3, 4, R)]);
        let b = key(&[(10, 11, R), (11, 12, R), (20, 21, B)]);
        assert_eq!(a, b);
    }

    #[test]
    fn decoded_graph_has_the_same_key() {
        let e = [(5, 1, B), (1, 3, R), (3, 5, B), (8, 9, R), (3, 7, B)];
        let k = key(&e);
        assert_eq!(canonicalize(&k.to_graph()).unwrap(), k);
        assert_eq!(k.to_graph().edge_count(), e.len());
    }

    #[test]
    fn regular_graphs_need_individualization() {
        // a 6-cycle and two triangles agree on every refinement signature
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6, B)).collect();
        let tri = [(0, 1, B), (1, 2, B), (2, 0, B), (3, 4, B), (4, 5, B), (5, 3, B)];
        assert_ne!(key(&c6), key(&tri));
        let shifted: Vec<_> = (0..6).map(|i| ((i + 2) % 6 + 10, (i + 3) % 6 + 10, B)).collect();
        assert_eq!(key(&c6), key(&shifted));
    }
}
