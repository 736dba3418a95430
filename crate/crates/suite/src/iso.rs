//! Every edge-colored graph with few edges, sorted into isomorphism classes by petgraph.

use std::collections::HashMap;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ramsey_core::board::{Color, ColoredGraph};
use ramsey_core::solver::canonicalize;

/// Edges on vertices `0..m` with no isolated vertex.
pub type Edges = Vec<(u32, u32, Color)>;

fn order(edges: &Edges) -> u32 {
    edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0)
}

fn petgraph_of(edges: &Edges) -> UnGraph<(), Color> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..order(edges)).map(|_| g.add_node(())).collect();
    for &(a, b, c) in edges {
        g.add_edge(nodes[a as usize], nodes[b as usize], c);
    }
    g
}

/// Vertex and edge counts plus the sorted (red, blue) degree pairs.
type Invariant = (u32, usize, Vec<(u8, u8)>);

fn invariant(edges: &Edges) -> Invariant {
    let m = order(edges);
    let mut deg = vec![(0u8, 0u8); m as usize];
    for &(a, b, c) in edges {
        for x in [a, b] {
            match c {
                Color::Red => deg[x as usize].0 += 1,
                Color::Blue => deg[x as usize].1 += 1,
            }
        }
    }
    deg.sort_unstable();
    (m, edges.len(), deg)
}

pub struct Classes {
    /// One representative per isomorphism class.
    pub reps: Vec<Edges>,
    /// Every generated graph with the index of its class.
    pub generated: Vec<(Edges, usize)>,
}

/// All colored graphs with at most `max_edges` edges and no isolated vertices.
/// Each representative is extended by one edge in every possible way; the
/// children are classified by exact isomorphism tests.
pub fn colored_graphs(max_edges: usize) -> Classes {
    let mut reps: Vec<Edges> = vec![Vec::new()];
    let mut generated = vec![(Vec::new(), 0)];
    let mut buckets: HashMap<Invariant, Vec<usize>> = HashMap::new();
    buckets.entry(invariant(&Vec::new())).or_default().push(0);
    let mut frontier = vec![0usize];
    for _ in 0..max_edges {
        let mut next = Vec::new();
        for &r in &frontier {
            let base = reps[r].clone();
            let m = order(&base);
            let mut pairs = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    if !base.iter().any(|&(x, y, _)| (x, y) == (a, b)) {
                        pairs.push((a, b));
                    }
                }
                pairs.push((a, m));
            }
            pairs.push((m, m + 1));
            for (a, b) in pairs {
                for c in [Color::Red, Color::Blue] {
                    let mut child = base.clone();
                    child.push((a, b, c));
                    let inv = invariant(&child);
                    let pg = petgraph_of(&child);
                    let bucket = buckets.entry(inv).or_default();
                    let found = bucket
                        .iter()
                        .copied()
                        .find(|&i| is_isomorphic_matching(&pg, &petgraph_of(&reps[i]), |_, _| true, |x, y| x == y));
                    let class = match found {
                        Some(i) => i,
                        None => {
                            reps.push(child.clone());
                            bucket.push(reps.len() - 1);
                            next.push(reps.len() - 1);
                            reps.len() - 1
                        }
                    };
                    generated.push((child, class));
                }
            }
        }
        frontier = next;
    }
    Classes { reps, generated }
}

fn board_of(edges: &Edges, ids: &[u32]) -> ColoredGraph {
    ColoredGraph::from_edges(edges.iter().map(|&(a, b, c)| (ids[a as usize], ids[b as usize], c))).unwrap()
}

/// Checks that canonical keys are equal exactly for isomorphic pairs: every
/// generated graph, also under a random relabeling with gaps, gets its class
/// representative's key, and representatives get pairwise distinct keys.
pub fn canon_agreement(max_edges: usize, seed: u64) -> (usize, usize, Vec<String>) {
    let classes = colored_graphs(max_edges);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identity: Vec<u32> = (0..2 * max_edges as u32 + 2).collect();
    let mut bad = Vec::new();
    let keys: Vec<_> = classes
        .reps
        .iter()
        .map(|e| canonicalize(&board_of(e, &identity)).unwrap())
        .collect();
    let mut owner = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        if let Some(j) = owner.insert(k.clone(), i) {
            bad.push(format!("non-isomorphic {:?} and {:?} share a key", classes.reps[j], classes.reps[i]));
        }
    }
    for (edges, class) in &classes.generated {
        let mut ids: Vec<u32> = (0..order(edges) + 3).map(|x| x * 3 + 1).collect();
        ids.shuffle(&mut rng);
        for labels in [&identity, &ids] {
            let k = canonicalize(&board_of(edges, labels)).unwrap();
            if k != keys[*class] {
                bad.push(format!("{edges:?} (labels {labels:?}) differs from its class {:?}", classes.reps[*class]));
            }
        }
        // the decoded key is a relabeling of the same graph
        let back = keys[*class].to_graph();
        let decoded: Edges = back.edges().iter().map(|e| (e.u.0, e.v.0, e.color)).collect();
        if !is_isomorphic_matching(&petgraph_of(&decoded), &petgraph_of(&classes.reps[*class]), |_, _| true, |x, y| x == y) {
            bad.push(format!("key of {:?} decodes to a different graph", classes.reps[*class]));
        }
    }
    (classes.reps.len(), classes.generated.len(), bad)
}
