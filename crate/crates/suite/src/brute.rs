//! Path queries by enumerating every simple path of a small graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_core::board::{Color, ColoredGraph, VertexId};

pub const COLORS: [Color; 2] = [Color::Red, Color::Blue];

/// A graph on local vertices `0..m` with a color per pair.
#[derive(Clone, Debug)]
pub struct Small {
    pub m: usize,
    pub color: Vec<Vec<Option<Color>>>,
    /// Board id of each local vertex.
    pub ids: Vec<u32>,
}

impl Small {
    pub fn random(rng: &mut impl Rng, max_vertices: usize) -> Small {
        let m = rng.gen_range(1..=max_vertices);
        let density: f64 = rng.gen_range(0.1..0.9);
        let mut color = vec![vec![None; m]; m];
        for a in 0..m {
            for b in a + 1..m {
                if rng.gen_bool(density) {
                    let c = if rng.gen_bool(0.5) { Color::Red } else { Color::Blue };
                    color[a][b] = Some(c);
                    color[b][a] = Some(c);
                }
            }
        }
        let mut pool: Vec<u32> = (0..(m as u32 + 4)).collect();
        pool.shuffle(rng);
        pool.truncate(m);
        Small { m, color, ids: pool }
    }

    pub fn board(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new();
        for a in 0..self.m {
            for b in a + 1..self.m {
                if let Some(c) = self.color[a][b] {
                    g.add_edge(VertexId(self.ids[a]), VertexId(self.ids[b]), c).unwrap();
                }
            }
        }
        g
    }

    fn with_edge(&self, u: usize, v: usize, c: Color) -> Small {
        let mut s = self.clone();
        s.color[u][v] = Some(c);
        s.color[v][u] = Some(c);
        s
    }

    /// Every simple `c`-path as a vertex sequence, in both directions, single vertices included.
    pub fn paths(&self, c: Color) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in 0..self.m {
            let mut path = vec![s];
            self.extend(c, &mut path, &mut out);
        }
        out
    }

    fn extend(&self, c: Color, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        for w in 0..self.m {
            if self.color[last][w] == Some(c) && !path.contains(&w) {
                path.push(w);
                self.extend(c, path, out);
                path.pop();
            }
        }
    }

    pub fn component(&self, c: Color, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.m];
        seen[v] = true;
        let mut stack = vec![v];
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for w in 0..self.m {
                if self.color[x][w] == Some(c) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp
    }
}

fn max_len<'a>(paths: impl Iterator<Item = &'a Vec<usize>>) -> usize {
    paths.map(Vec::len).max().unwrap_or(1)
}

fn through(s: &Small, c: Color, u: usize, v: usize) -> usize {
    let t = s.with_edge(u, v, c);
    let paths = t.paths(c);
    max_len(paths.iter().filter(|p| p.windows(2).any(|w| w[0] == u && w[1] == v)))
}

/// Compares every board path query with enumeration on one graph; returns
/// the number of queries and a description of each disagreement.
pub fn check_small(s: &Small) -> (usize, Vec<String>) {
    let g = s.board();
    let id = |i: usize| VertexId(s.ids[i]);
    let mut queries = 0;
    let mut bad = Vec::new();
    let mut cmp = |what: String, got: usize, want: usize| {
        queries += 1;
        if got != want {
            bad.push(format!("{what}: got {got}, expected {want} on {:?}", g.edges()));
        }
    };
    for c in COLORS {
        let paths = s.paths(c);
        cmp(format!("longest_path({c})"), g.longest_path(c).unwrap(), max_len(paths.iter()));
        for n in 1..=s.m + 1 {
            let want = paths.iter().any(|p| p.len() >= n);
            cmp(format!("has_path({c}, {n})"), usize::from(g.has_path(c, n).unwrap()), usize::from(want));
        }
        for x in 0..s.m {
            let comp = s.component(c, x);
            cmp(format!("component_size({c}, {x})"), g.component_size(c, id(x)), comp.len());
            cmp(
                format!("longest_path_in_component({c}, {x})"),
                g.longest_path_in_component(c, id(x)).unwrap(),
                max_len(paths.iter().filter(|p| comp.contains(&p[0]))),
            );
            cmp(
                format!("longest_path_from({c}, {x})"),
                g.longest_path_from(c, id(x), None).unwrap(),
                max_len(paths.iter().filter(|p| p[0] == x)),
            );
            for w in (0..s.m).filter(|&w| w != x) {
                cmp(
                    format!("longest_path_from({c}, {x}, excluding {w})"),
                    g.longest_path_from(c, id(x), Some(id(w))).unwrap(),
                    max_len(paths.iter().filter(|p| p[0] == x && !p.contains(&w))),
                );
                cmp(
                    format!("same_component({c}, {x}, {w})"),
                    usize::from(g.same_component(c, id(x), id(w))),
                    usize::from(comp.contains(&w)),
                );
            }
        }
        for u in 0..s.m {
            for v in u + 1..s.m {
                if s.color[u][v].is_some() {
                    continue;
                }
                let want = through(s, c, u, v);
                cmp(format!("longest_path_through({c}, {u}, {v})"), g.longest_path_through(c, id(u), id(v)).unwrap(), want);
                for cap in 1..=s.m + 1 {
                    cmp(
                        format!("longest_path_through_capped({c}, {u}, {v}, {cap})"),
                        g.longest_path_through_capped(c, id(u), id(v), cap),
                        want.min(cap),
                    );
                }
            }
        }
    }
    (queries, bad)
}

/// Runs [`check_small`] on `cases` random graphs with at most `max_vertices` vertices.
pub fn board_agreement(cases: usize, max_vertices: usize, seed: u64) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = 0;
    let mut bad = Vec::new();
    for _ in 0..cases {
        let (q, b) = check_small(&Small::random(&mut rng, max_vertices));
        queries += q;
        bad.extend(b);
    }
    (queries, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_on_a_triangle_with_tail() {
        let mut color = vec![vec![None; 4]; 4];
        for (a, b) in [(0, 1), (1, 2), (2, 0), (2, 3)] {
            color[a][b] = Some(Color::Blue);
            color[b][a] = Some(Color::Blue);
        }
        let s = Small { m: 4, color, ids: vec![0, 1, 2, 3] };
        let paths = s.paths(Color::Blue);
        assert_eq!(max_len(paths.iter()), 4);
        assert_eq!(max_len(s.paths(Color::Red).iter()), 1);
        assert_eq!(through(&s, Color::Blue, 0, 3), 4);
        assert_eq!(through(&s, Color::Red, 0, 3), 2);
    }

    #[test]
    fn board_queries_match_path_enumeration() {
        let (queries, bad) = board_agreement(2_000, 8, 11);
        assert!(queries > 100_000);
        assert!(bad.is_empty(), "{} mismatches, first: {}", bad.len(), bad[0]);
    }
}
