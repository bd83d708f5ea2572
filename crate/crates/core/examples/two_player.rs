//! Two-player verdicts, spoiling strategies and the infinite-memory plan.

use empg::game::{Certificate, Cmp, MpKind, ObjectiveSpec};
use empg::instances::{fig3, fig4};
use empg::io::{plan_to_json, render, strategy_to_json};
use empg::two_player::{build_infinite_plan, solve_two_player, winning_region};
use empg::Player::P2;
use num_bigint::BigInt;

fn main() -> empg::Result<()> {
    let strict = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict);
    let nonstrict = ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict);

    let g = fig3().with_owner(0, P2);
    let v = solve_two_player(&g, 0, &strict)?;
    println!("fig3 with player 2 at v0: {:?} via {}", v.answer, v.route);
    if let Certificate::Spoiling(s2) = &v.certificate {
        println!("{}", render(&strategy_to_json(&g, s2, "two-player")));
    }
    println!(
        "winning region of fig3: {:?}",
        winning_region(&fig3(), &strict)?
    );

    // fig4 needs infinite memory for the non-strict objective
    let g = fig4();
    let mut plan = build_infinite_plan(&g, 0, &nonstrict, None)?;
    println!("{}", render(&plan_to_json(&plan, "two-player")));
    let mut v = plan.current();
    let mut energy = BigInt::from(plan.d0);
    for steps in 1..=20_000 {
        let to = plan.propose()?.expect("all vertices belong to player 1");
        energy += &g.edge(g.edge_between(v, to).unwrap()).w.w1;
        plan.observe(to)?;
        v = to;
        if steps % 5000 == 0 {
            println!(
                "step {steps}: level {}, energy {energy}, {} switches",
                plan.level(),
                plan.switches().len()
            );
        }
    }
    Ok(())
}
