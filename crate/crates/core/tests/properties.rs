use proptest::prelude::*;

use ramsey_core::board::{Color, ColoredGraph, VertexId};
use ramsey_core::game::{play_strategy, replay, Status, Strategy as _};
use ramsey_core::painters::{PainterSpec, UniformRandom};
use ramsey_core::solver::canonicalize;
use ramsey_core::strategy::p4::{p4_bound, P4Builder};
use ramsey_core::strategy::pk::{pk_bound, PkBuilder};

fn colored_edges(max_vertex: u32, max_edges: usize) -> impl proptest::strategy::Strategy<Value = Vec<(u32, u32, Color)>> {
    let color = prop_oneof![Just(Color::Red), Just(Color::Blue)];
    proptest::collection::vec((0..max_vertex, 0..max_vertex, color), 0..max_edges).prop_map(|raw| {
        let mut seen = std::collections::HashSet::new();
        raw.into_iter()
            .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_key_ignores_labels(edges in colored_edges(9, 14), perm in Just((0..9u32).collect::<Vec<_>>()).prop_shuffle(), shift in 0u32..50) {
        let g = ColoredGraph::from_edges(edges.iter().copied()).unwrap();
        let h = ColoredGraph::from_edges(edges.iter().map(|&(a, b, c)| (perm[a as usize] + shift, perm[b as usize] + shift, c))).unwrap();
        let k = canonicalize(&g).unwrap();
        prop_assert_eq!(&k, &canonicalize(&h).unwrap());
        let back = k.to_graph();
        prop_assert_eq!(back.edge_count(), g.edge_count());
        prop_assert_eq!(canonicalize(&back).unwrap(), k);
    }

    #[test]
    fn capped_through_is_the_truncated_value(edges in colored_edges(8, 16), u in 0u32..9, v in 0u32..9, cap in 1usize..10) {
        let g = ColoredGraph::from_edges(edges.iter().copied()).unwrap();
        prop_assume!(u != v && g.color(VertexId(u), VertexId(v)).is_none());
        for c in [Color::Red, Color::Blue] {
            let full = g.longest_path_through(c, VertexId(u), VertexId(v)).unwrap();
            prop_assert_eq!(g.longest_path_through_capped(c, VertexId(u), VertexId(v), cap), full.min(cap));
            prop_assert!(full >= 2);
        }
    }

    #[test]
    fn p4_games_replay_and_respect_the_bound(n in 10usize..45, seed in any::<u64>()) {
        let mut b = P4Builder::new(n).unwrap();
        let cfg = b.config();
        let played = play_strategy(&mut b, &mut UniformRandom::new(seed), &cfg).unwrap();
        prop_assert!(played.failure.is_none(), "{:?}", played.failure);
        prop_assert_eq!(played.state.status, Status::BlueWin);
        prop_assert!(played.transcript.rounds <= p4_bound(n));
        prop_assert!(played.state.board.longest_path(Color::Red).unwrap() < 4);
        prop_assert!(b.audit(&played.state).is_empty());
        let again = replay(&played.transcript).unwrap();
        prop_assert_eq!(again.board.edges(), played.state.board.edges());
    }

    #[test]
    fn scripted_replies_reproduce_a_game(n in 10usize..30, seed in any::<u64>()) {
        let mut b = P4Builder::new(n).unwrap();
        let cfg = b.config();
        let first = play_strategy(&mut b, &mut UniformRandom::new(seed), &cfg).unwrap();
        let bits: Vec<bool> = first.transcript.moves.iter().map(|m| m.color == Color::Blue).collect();
        let mut painter = PainterSpec::Scripted(bits).build();
        let mut b2 = P4Builder::new(n).unwrap();
        let second = play_strategy(&mut b2, painter.as_mut(), &cfg).unwrap();
        prop_assert_eq!(second.transcript, first.transcript);
    }

    #[test]
    fn pk_games_replay_and_respect_the_bound(k in 5usize..8, n in 10usize..40, seed in any::<u64>()) {
        let mut b = PkBuilder::new(k, n).unwrap();
        let cfg = b.config();
        let played = play_strategy(&mut b, &mut UniformRandom::new(seed), &cfg).unwrap();
        prop_assert!(played.failure.is_none(), "{:?}", played.failure);
        prop_assert_eq!(played.state.status, Status::BlueWin);
        prop_assert!(played.transcript.rounds <= pk_bound(k, n));
        prop_assert!(played.state.board.longest_path(Color::Red).unwrap() < k);
        replay(&played.transcript).unwrap();
    }
}
