#![allow(clippy::needless_range_loop)]

use empg::game::{Answer, Cmp, GameStructure, MpKind, ObjectiveSpec};
use empg::graph::{enumerate_simple_cycles, product, MooreStrategy};
use empg::instances::{fig3, fig4, random_game, RandomGameParams};
use empg::multi_energy::solve_unknown_credit;
use empg::one_player::solve_one_player;
use empg::reduction::{pull_back_strategy, to_energy4};
use empg::sim::{simulate, StrategyHandle};
use empg::two_player::{solve_strict_pseudo_poly, solve_two_player, synthesize_strict_two_player};
use empg::Player::{P1, P2};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn strict() -> ObjectiveSpec {
    ObjectiveSpec::new(MpKind::Inf, Cmp::Strict)
}

fn check_sizes(g: &GameStructure) {
    let (meg, map) = to_energy4(g).unwrap();
    assert_eq!(meg.num_vertices(), g.num_vertices() + 2 * g.num_edges());
    assert_eq!(meg.num_edges(), 5 * g.num_edges());
    assert_eq!(
        BigInt::from(meg.max_abs_weight()),
        g.max_abs_weight().max(&BigInt::from(1)).clone()
    );
    for v in g.num_vertices()..meg.num_vertices() {
        assert_eq!(meg.owner(v), P1);
        assert!(map.gadget_of(v).is_some());
    }
    for v in 0..g.num_vertices() {
        assert_eq!(meg.owner(v), g.owner(v));
        assert!(map.is_original(v));
    }
}

#[test]
fn fig3_gadget_sizes() {
    let (meg, _) = to_energy4(&fig3()).unwrap();
    assert_eq!(
        (meg.num_vertices(), meg.num_edges(), meg.max_abs_weight()),
        (10, 20, 3)
    );
    check_sizes(&fig3());
}

#[test]
fn random_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        check_sizes(&random_game(&mut rng, &RandomGameParams::default()));
    }
}

#[test]
fn single_edge_gadget() {
    let g = GameStructure::from_ids(&[("v", P1)], &[("v", "v", 0, 0)], Some("v")).unwrap();
    let (meg, map) = to_energy4(&g).unwrap();
    assert_eq!(meg.num_edges(), 5);
    let (r, s) = (map.r[0], map.s[0]);
    let w = |a: usize, b: usize| meg.edges()[meg.edge_between(a, b).unwrap()].w.clone();
    assert_eq!(w(0, r), vec![0, 0, -1, 1]);
    assert_eq!(w(r, s), vec![0, -1, 0, 0]);
    assert_eq!(w(s, s), vec![0, 0, 1, -1]);
    assert_eq!(w(s, r), vec![0, 0, 0, 0]);
    assert_eq!(w(r, 0), vec![0, 0, 0, 0]);
    assert_eq!((meg.id(r), meg.id(s)), ("e0.r", "e0.s"));
}

#[test]
fn memoryless_copy_pulls_back_to_itself() {
    let g = fig3();
    let (meg, map) = to_energy4(&g).unwrap();
    // original choice: v0 → v1, v1 → v1
    let original = [1usize, 1];
    let mut choice = vec![None; meg.num_vertices()];
    for v in 0..g.num_vertices() {
        let k = g.edge_between(v, original[v]).unwrap();
        choice[v] = Some(map.r[k]);
    }
    for (k, e) in g.edges().iter().enumerate() {
        choice[map.r[k]] = Some(e.to);
        choice[map.s[k]] = Some(map.r[k]);
    }
    let gadget = MooreStrategy::memoryless(P1, choice);
    let back = pull_back_strategy(&gadget, &g, &map, 0).unwrap();
    assert_eq!(back.memory_size(), 1);
    for v in 0..g.num_vertices() {
        assert_eq!(back.next_move(0, v), Some(original[v]));
    }
}

/// Some closed walk is negative under `w`: Bellman-Ford from a virtual
/// source linked to every vertex.
fn has_negative_cycle(g: &GameStructure, w: impl Fn(usize) -> i64) -> bool {
    let mut dist = vec![0i64; g.num_vertices()];
    for _ in 0..=g.num_vertices() {
        let mut changed = false;
        for (e, edge) in g.edges().iter().enumerate() {
            if dist[edge.from] + w(e) < dist[edge.to] {
                dist[edge.to] = dist[edge.from] + w(e);
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
    true
}

/// Every reachable simple cycle of the product has `w1 ≥ 0` and `w2 ≥ 1`.
/// A closed walk splits into simple cycles, so it suffices that no closed
/// walk has `w1 < 0`, and none has `(n+1)·w2 − length < 0`, which for
/// simple cycles (length ≤ n) means `w2 ≤ 0`.
fn product_cycles_are_good(g: &GameStructure, s: &MooreStrategy, v0: usize) {
    let p = product(g, s, v0);
    let h = &p.game;
    let n = h.num_vertices() as i64;
    let w = |e: usize| {
        (
            i64::try_from(&h.edge(e).w.w1).unwrap(),
            i64::try_from(&h.edge(e).w.w2).unwrap(),
        )
    };
    assert!(
        !has_negative_cycle(h, |e| w(e).0),
        "a product cycle with w1 < 0"
    );
    assert!(
        !has_negative_cycle(h, |e| (n + 1) * w(e).1 - 1),
        "a product cycle with w2 <= 0"
    );
    if h.num_vertices() <= 12 {
        for c in enumerate_simple_cycles(h, 100_000).unwrap() {
            let mut walk = c.clone();
            walk.push(c[0]);
            let w = h.path_weight(&walk).unwrap();
            assert!(
                !w.w1.is_negative() && w.w2 >= BigInt::from(1),
                "cycle {c:?} weighs {w:?}"
            );
        }
    }
}

#[test]
fn fig3_pipeline() {
    let g = fig3();
    let (meg, _) = to_energy4(&g).unwrap();
    assert!(solve_unknown_credit(&meg, 64).winning[0]);
    let syn = synthesize_strict_two_player(&g, 0, &strict(), Some(64)).unwrap();
    product_cycles_are_good(&g, &syn.strategy, 0);
    let t = simulate(
        &g,
        0,
        StrategyHandle::Moore(syn.strategy.clone()),
        StrategyHandle::Moore(MooreStrategy::empty(&g, P2)),
        10_000,
        &syn.credit,
    )
    .unwrap();
    assert_eq!(t.violation_count, 0);
    assert!(t.min_energy >= BigInt::from(0));
}

#[test]
fn fig4_gadget_is_not_won() {
    let v = solve_strict_pseudo_poly(&fig4(), 0, &strict(), None).unwrap();
    assert_ne!(v.answer, Answer::Yes);
    assert_eq!(
        solve_one_player(&fig4(), 0, &strict()).unwrap().answer,
        Answer::No
    );
}

#[test]
fn round_trip_agreement() {
    let params = RandomGameParams {
        max_vertices: 4,
        max_weight: 2,
        ..RandomGameParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut compared, mut unknown, mut synthesized) = (0, 0, 0);
    for _ in 0..150 {
        let g = random_game(&mut rng, &params);
        let direct = solve_two_player(&g, 0, &strict()).unwrap().answer;
        let via = solve_strict_pseudo_poly(&g, 0, &strict(), None)
            .unwrap()
            .answer;
        if via == Answer::Unknown {
            unknown += 1;
            continue;
        }
        compared += 1;
        assert_eq!(direct, via, "{g:?}");
        if via == Answer::Yes {
            let syn = synthesize_strict_two_player(&g, 0, &strict(), None).unwrap();
            product_cycles_are_good(&g, &syn.strategy, 0);
            synthesized += 1;
        }
    }
    assert!(
        compared > 100 && synthesized > 10,
        "{compared} compared, {synthesized} synthesized, {unknown} unknown"
    );
}
