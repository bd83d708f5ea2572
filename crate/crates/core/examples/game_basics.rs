//! Build a game, read a play prefix and fold a threshold into the weights.

use empg::game::{normalize_threshold, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec, PlayPrefix};
use empg::Player::{P1, P2};
use num_rational::BigRational;

fn main() -> empg::Result<()> {
    let g = GameStructure::from_ids(
        &[("a", P1), ("b", P2)],
        &[
            ("a", "a", 2, -1),
            ("a", "b", -1, 1),
            ("b", "a", 0, 2),
            ("b", "b", 1, -3),
        ],
        Some("a"),
    )?;
    println!(
        "{} vertices, {} edges, ||E|| = {}",
        g.num_vertices(),
        g.num_edges(),
        g.max_abs_weight()
    );

    let p = PlayPrefix::from_ids(&g, &["a", "a", "b", "b", "a", "b", "a"])?;
    println!("total weight {:?}", p.total());
    for k in 1..p.len() {
        println!(
            "k = {k}: energy {}, MP2 {}",
            p.energy_level(Dim::One, k)?,
            p.running_average(Dim::Two, k)?
        );
    }
    let d = p.cycle_decomposition();
    println!("cycles {:?}, stack {:?}", d.cycles, d.stack);

    // MP2 >= 1/3 becomes MP2 >= 0 on (w1, 3·w2 − 1)
    let spec = ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict)
        .with_threshold(BigRational::new(1.into(), 3.into()));
    let (h, s0) = normalize_threshold(&g, &spec, Dim::Two)?;
    for e in h.edges() {
        println!("{} -> {}: {:?}", h.id(e.from), h.id(e.to), e.w);
    }
    println!("objective after folding: {s0:?}");
    Ok(())
}
