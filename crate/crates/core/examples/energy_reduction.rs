//! Reduce a mean-payoff game to a 4-dimensional energy game, solve it and
//! pull the winning strategy back.

use empg::game::{Cmp, MpKind, ObjectiveSpec};
use empg::instances::fig3;
use empg::io::{energy_game_to_json, render, strategy_to_json};
use empg::multi_energy::{decide, default_cap};
use empg::reduction::to_energy4;
use empg::two_player::synthesize_strict_two_player;

fn main() -> empg::Result<()> {
    let g = fig3();
    let (meg, map) = to_energy4(&g)?;
    println!(
        "{} vertices, {} edges in the energy game",
        meg.num_vertices(),
        meg.num_edges()
    );
    println!("{}", render(&energy_game_to_json(&meg, "reduction")));
    for v in 0..meg.num_vertices() {
        if let Some(e) = map.gadget_of(v) {
            println!("gadget vertex {v} belongs to edge {e}");
        }
    }

    let d = decide(&meg, 0, default_cap(&meg))?;
    println!("energy game at cap {}: {:?}", d.cap, d.answer);

    let spec = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict);
    let s = synthesize_strict_two_player(&g, 0, &spec, None)?;
    println!(
        "gadget credit {:?}, gadget memory {}, credit {}",
        s.gadget_credit, s.gadget_memory, s.credit
    );
    println!(
        "{}",
        render(&strategy_to_json(&g, &s.strategy, "reduction"))
    );
    Ok(())
}
