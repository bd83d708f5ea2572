//! Decide one-player games and synthesize strategies for both objectives.

use empg::cycles::{good_cycle_exists, good_multicycle_exists};
use empg::game::ObjectiveSpec;
use empg::instances::{fig3, fig4};
use empg::io::{render, schedule_to_json, strategy_to_json, verdict_to_json};
use empg::one_player::{solve_one_player, synthesize_nonstrict, synthesize_strict};

fn main() -> empg::Result<()> {
    for g in [fig3(), fig4()] {
        for spec in ObjectiveSpec::all() {
            let v = solve_one_player(&g, 0, &spec)?;
            println!("{spec:?}: {}", render(&verdict_to_json(&g, &v)));
        }
    }

    // strict: finite memory
    let g = fig3();
    let wit = good_cycle_exists(&g, 0).expect("fig3 has a good cycle");
    let (s, c0) = synthesize_strict(&g, 0, &wit)?;
    println!(
        "strict strategy with credit {c0}: {}",
        render(&strategy_to_json(&g, &s, "one-player"))
    );

    // non-strict on fig4: rounds of growing length
    let g = fig4();
    let m = good_multicycle_exists(&g, 0).expect("fig4 has a good multicycle");
    let sched = synthesize_nonstrict(&g, 0, &m)?;
    println!("{}", render(&schedule_to_json(&g, &sched, "one-player")));
    let mut cur = sched.cursor();
    let play: Vec<&str> = (0..24).map(|_| g.id(cur.next().unwrap())).collect();
    println!("first moves: {}", play.join(" "));
    Ok(())
}
