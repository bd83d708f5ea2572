//! Play two strategies against each other and check the objective on the lasso.

use empg::cycles::good_cycle_exists;
use empg::game::ObjectiveSpec;
use empg::graph::MooreStrategy;
use empg::instances::fig3;
use empg::io::{render, trace_to_json};
use empg::one_player::synthesize_strict;
use empg::sim::{check_lasso_objective, simulate_with_stride, StrategyHandle};
use empg::Player::P2;

fn main() -> empg::Result<()> {
    let g = fig3();
    let wit = good_cycle_exists(&g, 0).expect("good cycle");
    let (s1, c0) = synthesize_strict(&g, 0, &wit)?;
    let t = simulate_with_stride(
        &g,
        0,
        StrategyHandle::Moore(s1),
        StrategyHandle::Moore(MooreStrategy::empty(&g, P2)),
        2000,
        &c0,
        250,
    )?;
    println!(
        "min energy {}, violations {}",
        t.min_energy, t.violation_count
    );
    for spec in ObjectiveSpec::all() {
        println!("{spec:?}: {:?}", check_lasso_objective(&t, &spec)?);
    }

    // random play has no lasso to judge, only sampled averages
    let r = simulate_with_stride(
        &g,
        0,
        StrategyHandle::UniformRandom(7),
        StrategyHandle::UniformRandom(8),
        2000,
        &c0,
        500,
    )?;
    println!("{}", render(&trace_to_json(&g, &r)));
    Ok(())
}
