use empg::error::Error;
use empg::game::{GameStructure, Weight2};
use empg::graph::{
    enumerate_memoryless, enumerate_simple_cycles, product, reachable_subgraph, sccs,
    MooreStrategy, ENUMERATION_GUARD,
};
use empg::instances::{fig3, fig4};
use empg::oracle::simple_cycles_by_permutation;
use empg::Player::{self, P1, P2};

fn game(vs: &[(&str, Player)], es: &[(&str, &str, i64, i64)]) -> GameStructure {
    GameStructure::from_ids(vs, es, Some(vs[0].0)).unwrap()
}

#[test]
fn reachable_subgraphs() {
    let s = reachable_subgraph(&fig3(), 0);
    assert_eq!(s.game.num_vertices(), 2);
    assert!(s.sinks.is_empty());

    let g = game(
        &[("v0", P1), ("u", P1)],
        &[("v0", "v0", 0, 0), ("u", "u", 1, 1)],
    );
    let s = reachable_subgraph(&g, 0);
    assert_eq!(s.game.ids(), &["v0".to_string()]);
    assert_eq!(s.from_parent(1), None);

    let g = game(
        &[("v0", P1), ("v1", P1)],
        &[("v0", "v1", 0, 0), ("v1", "v1", 0, 0)],
    );
    assert_eq!(reachable_subgraph(&g, 0).game.num_vertices(), 2);
}

#[test]
fn scc_examples() {
    assert_eq!(sccs(&fig3()).components, vec![vec![0, 1]]);
    let g = game(
        &[("a", P1), ("b", P1)],
        &[("a", "a", 0, 0), ("a", "b", 0, 0), ("b", "b", 0, 0)],
    );
    let d = sccs(&g);
    assert_eq!(d.components.len(), 2);
    assert_ne!(d.component_of[0], d.component_of[1]);
    let g = game(&[("a", P1)], &[("a", "a", 0, 0)]);
    assert_eq!(sccs(&g).components, vec![vec![0]]);
}

#[test]
fn product_examples() {
    // memoryless: at most |V| product vertices
    let s = MooreStrategy::memoryless(P1, vec![Some(0), Some(0)]);
    let p = product(&fig4(), &s, 0);
    assert_eq!(p.game.num_vertices(), 1);
    let cycles = enumerate_simple_cycles(&p.game, 10).unwrap();
    assert_eq!(cycles, vec![vec![0]]);
    assert_eq!(
        p.game.edge(p.game.edge_between(0, 0).unwrap()).w,
        Weight2::new(1, -1)
    );

    // three memory states counting visits to v1, on Fig. 3
    let s = MooreStrategy {
        player: P1,
        initial: 0,
        update: vec![vec![0, 1], vec![0, 2], vec![0, 0]],
        next: vec![
            vec![Some(1), Some(1)],
            vec![Some(1), Some(1)],
            vec![Some(1), Some(0)],
        ],
    };
    s.validate(&fig3()).unwrap();
    let p = product(&fig3(), &s, 0);
    assert!(p.game.num_vertices() <= 2 * 3);
}

#[test]
fn fig3_simple_cycles() {
    let c = enumerate_simple_cycles(&fig3(), ENUMERATION_GUARD).unwrap();
    assert_eq!(c.len(), 3);
    for cyc in [vec![0], vec![1], vec![0, 1]] {
        assert!(c.contains(&cyc));
    }
}

#[test]
fn complete_digraph_cycles() {
    let vs = [("a", P1), ("b", P1), ("c", P1)];
    let mut es = Vec::new();
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            es.push((x, y, 0, 0));
        }
    }
    let g = game(&vs, &es);
    let mut dfs = enumerate_simple_cycles(&g, ENUMERATION_GUARD).unwrap();
    dfs.sort();
    assert_eq!(dfs, simple_cycles_by_permutation(&g).unwrap());
    // 3 self-loops, 3 two-cycles, 2 three-cycles
    assert_eq!(dfs.len(), 8);
    let g = game(&vs, &[("a", "b", 0, 0), ("b", "c", 0, 0), ("c", "c", 0, 0)]);
    assert_eq!(enumerate_simple_cycles(&g, 10).unwrap().len(), 1);
    assert!(matches!(
        enumerate_simple_cycles(&fig3(), 2),
        Err(Error::GuardExceeded(_))
    ));
}

#[test]
fn memoryless_counts() {
    assert_eq!(enumerate_memoryless(&fig3(), P2, 10).unwrap().count(), 1);
    let g = game(
        &[("a", P2), ("b", P1), ("c", P1)],
        &[
            ("a", "a", 0, 0),
            ("a", "b", 0, 0),
            ("a", "c", 0, 0),
            ("b", "a", 0, 0),
            ("c", "c", 0, 0),
        ],
    );
    assert_eq!(enumerate_memoryless(&g, P2, 10).unwrap().count(), 3);
    let g = game(
        &[("a", P2), ("b", P2), ("c", P1)],
        &[
            ("a", "a", 0, 0),
            ("a", "b", 0, 0),
            ("b", "a", 0, 0),
            ("b", "b", 0, 0),
            ("b", "c", 0, 0),
            ("c", "c", 0, 0),
        ],
    );
    let all: Vec<_> = enumerate_memoryless(&g, P2, 10).unwrap().collect();
    assert_eq!(all.len(), 6);
    for (i, s) in all.iter().enumerate() {
        assert!(all[i + 1..].iter().all(|t| t.next != s.next));
    }
    assert!(matches!(
        enumerate_memoryless(&g, P2, 5),
        Err(Error::GuardExceeded(_))
    ));
}
