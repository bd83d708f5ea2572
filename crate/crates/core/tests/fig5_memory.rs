mod common;

use common::{counting_machine, some_machine_wins};
use empg::game::{normalize_threshold, Answer, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec};
use empg::graph::MooreStrategy;
use empg::instances::fig5;
use empg::one_player::solve_one_player;
use empg::sim::{check_lasso_objective, simulate, LassoVerdict, StrategyHandle};
use empg::Player::P2;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Fig. 5 with `MP > −1/(2W)` folded into the weights: `(w1, 2W·w2 + 1)`
/// against `MP > 0`.
fn shifted(w: i64) -> GameStructure {
    let spec = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict)
        .with_threshold(BigRational::new((-1).into(), (2 * w).into()));
    normalize_threshold(&fig5(w), &spec, Dim::Two).unwrap().0
}

fn machine_wins(g: &GameStructure, s: MooreStrategy, credit: i64) -> bool {
    let t = simulate(
        g,
        0,
        StrategyHandle::Moore(s),
        StrategyHandle::Moore(MooreStrategy::empty(g, P2)),
        2000,
        &BigInt::from(credit),
    )
    .unwrap();
    let strict = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict);
    check_lasso_objective(&t, &strict).unwrap() == LassoVerdict::Satisfied
}

#[test]
fn verdicts() {
    for w in 2..=4 {
        let g = fig5(w);
        for spec in ObjectiveSpec::all() {
            let expected = if spec.is_strict() {
                Answer::No
            } else {
                Answer::Yes
            };
            assert_eq!(
                solve_one_player(&g, 0, &spec).unwrap().answer,
                expected,
                "W = {w}"
            );
        }
        assert_eq!(
            solve_one_player(
                &shifted(w),
                0,
                &ObjectiveSpec::new(MpKind::Inf, Cmp::Strict)
            )
            .unwrap()
            .answer,
            Answer::Yes
        );
    }
}

#[test]
fn memory_up_to_norm_loses() {
    for w in 2..=4i64 {
        let g = shifted(w);
        for m in 1..=w as usize {
            assert!(
                !some_machine_wins(&g, m),
                "W = {w}: a machine with {m} states wins"
            );
        }
    }
}

/// `2W − 1` states lose and `2W` win: a play with `a` visits to `v1` and `b`
/// loops there needs `b > 2a(2W² − 1)/(2W + 1)`, and a machine with `m`
/// states loops at most `m − 1` times per visit.
#[test]
fn tight_bound_for_w2() {
    let g = shifted(2);
    assert!(!some_machine_wins(&g, 3));
    assert!(some_machine_wins(&g, 4));
}

#[test]
fn explicit_machines() {
    for w in 2..=4i64 {
        let g = shifted(w);
        let norm = w as usize;
        // 2||E|| + 1 states
        assert!(machine_wins(&g, counting_machine(2 * norm + 1), w));
        assert!(machine_wins(&g, counting_machine(2 * norm), w));
        assert!(!machine_wins(&g, counting_machine(2 * norm - 1), 1_000_000));
        assert!(!machine_wins(&g, counting_machine(norm), 1_000_000));
    }
}
