//! Named example games and a seeded random game generator.

use rand::Rng;

use crate::game::{GameStructure, Player};

/// Two player-1 vertices; good cycle built from both self-loops.
pub fn fig3() -> GameStructure {
    GameStructure::from_ids(
        &[("v0", Player::P1), ("v1", Player::P1)],
        &[
            ("v0", "v0", 1, -1),
            ("v0", "v1", 0, -1),
            ("v1", "v1", -1, 3),
            ("v1", "v0", 0, -1),
        ],
        Some("v0"),
    )
    .expect("valid game")
}

/// Same graph with self-loops `(1,−1)` and `(−1,1)`: only a zero multicycle.
pub fn fig4() -> GameStructure {
    GameStructure::from_ids(
        &[("v0", Player::P1), ("v1", Player::P1)],
        &[
            ("v0", "v0", 1, -1),
            ("v0", "v1", 0, -1),
            ("v1", "v1", -1, 1),
            ("v1", "v0", 0, -1),
        ],
        Some("v0"),
    )
    .expect("valid game")
}

/// Memory lower-bound game with `||E|| = w`.
pub fn fig5(w: i64) -> GameStructure {
    assert!(w >= 1, "W must be positive");
    GameStructure::from_ids(
        &[("v0", Player::P1), ("v1", Player::P1)],
        &[
            ("v0", "v1", w, -w),
            ("v1", "v0", w, -w),
            ("v1", "v1", -1, 1),
        ],
        Some("v0"),
    )
    .expect("valid game")
}

/// Parameters of [`random_game`].
#[derive(Clone, Debug)]
pub struct RandomGameParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_out_degree: usize,
    /// Weights are drawn from `-max_weight..=max_weight` on both dimensions.
    pub max_weight: i64,
    /// Probability that a vertex belongs to player 2.
    pub p2_fraction: f64,
}

impl Default for RandomGameParams {
    fn default() -> Self {
        RandomGameParams {
            min_vertices: 1,
            max_vertices: 6,
            max_out_degree: 3,
            max_weight: 3,
            p2_fraction: 0.5,
        }
    }
}

/// Random game with vertices `v0 … v(n−1)`, distinct successors per vertex
/// and initial vertex `v0`.
pub fn random_game(rng: &mut impl Rng, p: &RandomGameParams) -> GameStructure {
    let n = rng.gen_range(p.min_vertices..=p.max_vertices);
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let verts: Vec<(&str, Player)> = ids
        .iter()
        .map(|s| {
            (
                s.as_str(),
                if rng.gen_bool(p.p2_fraction) {
                    Player::P2
                } else {
                    Player::P1
                },
            )
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        let d = rng.gen_range(1..=p.max_out_degree.min(n));
        let mut targets: Vec<usize> = (0..n).collect();
        for k in 0..d {
            let j = rng.gen_range(k..n);
            targets.swap(k, j);
        }
        for &t in &targets[..d] {
            let w1 = rng.gen_range(-p.max_weight..=p.max_weight);
            let w2 = rng.gen_range(-p.max_weight..=p.max_weight);
            edges.push((ids[u].as_str(), ids[t].as_str(), w1, w2));
        }
    }
    GameStructure::from_ids(&verts, &edges, Some("v0")).expect("generated game is valid")
}
