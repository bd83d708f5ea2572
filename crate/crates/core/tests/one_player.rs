#![allow(clippy::needless_range_loop)]

use empg::cycles::{good_cycle_exists, good_multicycle_exists, CycleWitness};
use empg::error::Error;
use empg::game::{Answer, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec, PlayPrefix};
use empg::graph::MooreStrategy;
use empg::instances::{fig3, fig4, fig5};
use empg::one_player::{
    local_minima, solve_one_player, synthesize_nonstrict, synthesize_strict, ScheduleKind,
};
use empg::sim::{check_lasso_objective, simulate, LassoVerdict, StrategyHandle};
use empg::Player::{P1, P2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn strict() -> ObjectiveSpec {
    ObjectiveSpec::new(MpKind::Inf, Cmp::Strict)
}

fn nonstrict() -> ObjectiveSpec {
    ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict)
}

#[test]
fn figure_verdicts() {
    for spec in ObjectiveSpec::all() {
        assert_eq!(
            solve_one_player(&fig3(), 0, &spec).unwrap().answer,
            Answer::Yes
        );
        let v = solve_one_player(&fig4(), 0, &spec).unwrap();
        if spec.is_strict() {
            assert_eq!(v.answer, Answer::No);
        } else {
            assert_eq!(v.answer, Answer::Yes);
            assert_eq!(v.initial_credit, Some(BigInt::from(0)));
        }
    }
    let g = GameStructure::from_ids(&[("v0", P1)], &[("v0", "v0", -1, 1)], Some("v0")).unwrap();
    assert_eq!(
        solve_one_player(&g, 0, &strict()).unwrap().answer,
        Answer::No
    );
    let g2 = fig3().with_owner(0, P2);
    assert!(matches!(
        solve_one_player(&g2, 0, &strict()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn fig3_strict_strategy_lasso() {
    let g = fig3();
    let wit = good_cycle_exists(&g, 0).unwrap();
    let (s, c0) = synthesize_strict(&g, 0, &wit).unwrap();
    // (|V| − 1)·||E||
    assert_eq!(c0, BigInt::from(3));
    let t = simulate(
        &g,
        0,
        StrategyHandle::Moore(s),
        StrategyHandle::Moore(MooreStrategy::empty(&g, P2)),
        10_000,
        &c0,
    )
    .unwrap();
    assert_eq!(t.violation_count, 0);
    let l = t
        .lasso
        .as_ref()
        .expect("both strategies have finite memory");
    assert_eq!(l.cycle_len, 170);
    assert_eq!(l.average.1, q(22, 170));
    assert!(t.min_energy >= BigInt::from(0));
    for spec in ObjectiveSpec::all() {
        assert_eq!(
            check_lasso_objective(&t, &spec).unwrap(),
            LassoVerdict::Satisfied
        );
    }
}

#[test]
fn simple_good_loop_is_memoryless() {
    let g = GameStructure::from_ids(&[("v0", P1)], &[("v0", "v0", 0, 1)], Some("v0")).unwrap();
    let wit = good_cycle_exists(&g, 0).unwrap();
    assert!(matches!(wit, CycleWitness::SimpleGood { .. }));
    let (s, c0) = synthesize_strict(&g, 0, &wit).unwrap();
    assert_eq!(s.memory_size(), 1);
    assert_eq!(c0, BigInt::from(0));
}

#[test]
fn fig4_schedule() {
    let g = fig4();
    let wit = good_multicycle_exists(&g, 0).unwrap();
    let s = synthesize_nonstrict(&g, 0, &wit).unwrap();
    assert_eq!(s.initial_credit, BigInt::from(0));
    match &s.kind {
        ScheduleKind::Rounds {
            alpha, beta, gamma, ..
        } => assert_eq!((*alpha, *beta, *gamma), (1, 1, 0)),
        other => panic!("expected rounds, got {other:?}"),
    }
    let mut cursor = s.cursor();
    let mut p = PlayPrefix::new(&g, vec![0]).unwrap();
    let mut rounds = vec![0u64];
    for _ in 0..100_000 {
        let v = cursor.next().unwrap();
        p.push(&g, v).unwrap();
        rounds.push(cursor.round());
    }
    for k in 1..=p.len() {
        assert!(p.energy_level(Dim::One, k).unwrap() >= &BigInt::from(0));
        let z = rounds[k] as i64;
        if z >= 2 {
            let bound = q(-3 * z, (z - 1) * (z + 2));
            assert!(
                p.running_average(Dim::Two, k).unwrap() >= bound,
                "step {k}, round {z}"
            );
        }
    }
    assert!(*rounds.last().unwrap() > 300);
}

#[test]
fn fig5_schedule_is_a_zero_cycle() {
    let w = 2;
    let g = fig5(w);
    let wit = good_multicycle_exists(&g, 0).unwrap();
    let s = synthesize_nonstrict(&g, 0, &wit).unwrap();
    let ScheduleKind::Periodic { cycle } = &s.kind else {
        panic!("expected a periodic schedule")
    };
    let mut walk = s.access.clone();
    walk.extend(cycle[1..].iter().copied());
    walk.push(cycle[0]);
    assert_eq!(
        g.path_weight(&empg::graph::close(cycle)).unwrap(),
        empg::game::Weight2::new(0, 0)
    );
    assert_eq!(cycle.len(), 2 + 2 * w as usize);
    assert!(s.initial_credit <= BigInt::from(w));
    let t = simulate(
        &g,
        0,
        StrategyHandle::Schedule(s.clone()),
        StrategyHandle::UniformRandom(0),
        1000,
        &BigInt::from(w),
    )
    .unwrap();
    assert_eq!(t.violation_count, 0);
    // the play is access·cycle^ω with w(cycle) = (0,0): w2 stays within one period's worth of weight
    let (k, avg) = t.averages.last().unwrap();
    let w2 = avg * BigRational::from_integer(BigInt::from(*k));
    assert!(
        w2.abs()
            <= BigRational::from_integer(BigInt::from((s.access.len() + cycle.len()) as i64 * w))
    );
}

#[test]
fn local_minima_examples() {
    let g = fig4();
    // nonincreasing energy: v0 v1 v1 v1 has levels 0, 0, -1, -2
    let p = PlayPrefix::from_ids(&g, &["v0", "v1", "v1", "v1"]).unwrap();
    assert_eq!(local_minima(&p, 3).unwrap(), vec![3]);
    let z = GameStructure::from_ids(&[("a", P1)], &[("a", "a", 0, 0)], None).unwrap();
    let p = PlayPrefix::new(&z, vec![0; 6]).unwrap();
    assert_eq!(local_minima(&p, 5).unwrap(), (0..=5).collect::<Vec<_>>());
    assert!(local_minima(&p, 6).is_err());

    // Fig. 4 schedule through round 2: v0 (v0)^1 v1 (v1)^1 v0 (v0)^2 v1 (v1)^2 v0
    let s = synthesize_nonstrict(&g, 0, &good_multicycle_exists(&g, 0).unwrap()).unwrap();
    let mut vs = vec![0];
    vs.extend(s.cursor().take(12));
    assert_eq!(vs, vec![0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0]);
    let p = PlayPrefix::new(&g, vs.clone()).unwrap();
    let mins = local_minima(&p, 10).unwrap();
    // independent scan of the energy levels
    let levels: Vec<i64> = vs
        .windows(2)
        .scan(0, |e, w| {
            *e += match (w[0], w[1]) {
                (0, 0) => 1,
                (1, 1) => -1,
                _ => 0,
            };
            Some(*e)
        })
        .collect();
    let mut all = vec![0];
    all.extend(levels);
    let expected: Vec<usize> = (0..=10)
        .filter(|&k| (k + 1..=10).all(|l| all[k] <= all[l]))
        .collect();
    assert_eq!(mins, expected);
    // every entry into v0 (the start of a v0 loop block) is a local minimum
    for k in 1..=10 {
        if vs[k] == 0 && vs[k - 1] == 1 {
            assert!(mins.contains(&k), "entry at {k}");
        }
    }
}

#[test]
fn minima_count_grows_with_horizon() {
    let g = fig4();
    let s = synthesize_nonstrict(&g, 0, &good_multicycle_exists(&g, 0).unwrap()).unwrap();
    let mut cursor = s.cursor();
    let mut vs = vec![0];
    let mut ends = Vec::new();
    while vs.len() < 3000 {
        let before = cursor.round();
        vs.push(cursor.next().unwrap());
        if cursor.round() != before && before > 0 {
            ends.push(vs.len() - 2);
        }
    }
    let p = PlayPrefix::new(&g, vs).unwrap();
    // horizons taken at round ends, where the finite-horizon tail is a single position
    let mut last = 0;
    for &h in &ends {
        let n = local_minima(&p, h).unwrap().len();
        assert!(n >= last, "horizon {h}: {n} < {last}");
        last = n;
    }
    assert!(ends.len() > 10 && last > 10);
}

/// Every Moore machine with at most four states loses on Fig. 4: its unique
/// play is a lasso whose cycle has negative energy or negative average.
#[test]
fn fig4_finite_memory_impossibility() {
    let g = fig4();
    let w = |u: usize, v: usize| -> (i64, i64) {
        let e = g.edge(g.edge_between(u, v).unwrap());
        (
            i64::try_from(&e.w.w1).unwrap(),
            i64::try_from(&e.w.w2).unwrap(),
        )
    };
    let weights = [[w(0, 0), w(0, 1)], [w(1, 0), w(1, 1)]];
    for m in 1..=4usize {
        let cells = 2 * m;
        let updates = m.pow(cells as u32);
        let moves = 1usize << cells;
        for u in 0..updates {
            let update: Vec<usize> = (0..cells).map(|i| u / m.pow(i as u32) % m).collect();
            for mv in 0..moves {
                // state (vertex, memory); next move read at (memory, vertex)
                let mut seen = vec![usize::MAX; 2 * m];
                let (mut v, mut mem) = (0usize, 0usize);
                let mut sums = vec![(0i64, 0i64)];
                loop {
                    let key = v * m + mem;
                    if seen[key] != usize::MAX {
                        let start = seen[key];
                        let (a, b) = sums[start];
                        let (c, d) = *sums.last().unwrap();
                        let (dw1, dw2) = (c - a, d - b);
                        assert!(
                            dw1 < 0 || dw2 < 0,
                            "memory {m}: a winning lasso with cycle ({dw1},{dw2})"
                        );
                        break;
                    }
                    seen[key] = sums.len() - 1;
                    let t = (mv >> (mem * 2 + v)) & 1;
                    let (x, y) = weights[v][t];
                    let (s1, s2) = *sums.last().unwrap();
                    sums.push((s1 + x, s2 + y));
                    mem = update[mem * 2 + t];
                    v = t;
                }
            }
        }
    }
}

#[test]
fn inf_and_sup_agree() {
    for g in [fig3(), fig4(), fig5(2), fig5(3)] {
        for cmp in [Cmp::Strict, Cmp::NonStrict] {
            let a = solve_one_player(&g, 0, &ObjectiveSpec::new(MpKind::Inf, cmp))
                .unwrap()
                .answer;
            let b = solve_one_player(&g, 0, &ObjectiveSpec::new(MpKind::Sup, cmp))
                .unwrap()
                .answer;
            assert_eq!(a, b);
        }
    }
    assert_eq!(
        solve_one_player(&fig5(2), 0, &nonstrict()).unwrap().answer,
        Answer::Yes
    );
    assert_eq!(
        solve_one_player(&fig5(2), 0, &strict()).unwrap().answer,
        Answer::No
    );
}
