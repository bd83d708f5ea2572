//! Energy mean-payoff games: cycle detection, one-player and two-player
//! solvers, the reduction to multi-energy games and a play simulator.

#![allow(
    clippy::needless_range_loop,
    clippy::type_complexity,
    clippy::large_enum_variant
)]

pub mod cycles;
pub mod error;
pub mod game;
pub mod graph;
pub mod instances;
pub mod io;
pub mod lp;
pub mod multi_energy;
pub mod one_player;
pub mod oracle;
pub mod reduction;
pub mod sim;
pub mod two_player;

pub use error::{Error, Result};
pub use game::{GameStructure, ObjectiveSpec, Player};
