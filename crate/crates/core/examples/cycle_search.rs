//! Strongly connected components and good (multi)cycles of the example games.

use empg::cycles::{good_cycle_exists, good_multicycle_exists};
use empg::graph::sccs;
use empg::instances::{fig3, fig4, fig5};

fn main() {
    for (name, g) in [("fig3", fig3()), ("fig4", fig4()), ("fig5 W=3", fig5(3))] {
        let s = sccs(&g);
        println!("{name}: components {:?}", s.components);
        match good_cycle_exists(&g, 0) {
            Some(w) => println!("  good cycle: {w:?}"),
            None => println!("  no good cycle"),
        }
        match good_multicycle_exists(&g, 0) {
            Some(m) => println!("  good multicycle of weight {:?}", m.total_weight()),
            None => println!("  no good multicycle"),
        }
    }
}
