//! Compare every solver with the brute-force oracles on random games.

use empg::instances::{random_game, RandomGameParams};
use empg::oracle::cross_check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> empg::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut bad, mut unknown, mut compared) = (0, 0, 0);
    for i in 0..n {
        let g = random_game(&mut rng, &RandomGameParams::default());
        let c = cross_check(&g, 0, None)?;
        compared += c.reduction_compared;
        unknown += c.reduction_unknown;
        if !c.is_clean() {
            bad += 1;
            println!("game {i}: {:?}", c.disagreements().collect::<Vec<_>>());
        }
    }
    println!("{n} games, {bad} with disagreements, gadget route Unknown {unknown}/{compared}");
    Ok(())
}
