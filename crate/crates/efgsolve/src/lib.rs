//! Tabular solvers for small imperfect-information games.
//!
//! The crate provides four built-in game families (Kuhn poker, Leduc poker,
//! Goofspiel, and Liar's Dice), a family of counterfactual-regret solvers
//! assembled from swappable update components, exact best response and
//! exploitability, and a population-based training loop whose meta-game is
//! solved by pluggable meta-strategy solvers.

pub mod bench;
pub mod cfr;
pub mod error;
pub mod exploitability;
pub mod game;
pub mod games;
pub mod policy;
pub mod psro;

pub use cfr::{CfrComponents, CfrSolver, InfoStateNode, UpdateMode};
pub use error::{Error, Result};
pub use exploitability::{best_response, exploitability, BestResponseResult};
pub use game::{expected_returns, ActionId, Game, GameSpec, GameState, InfoKey, ToMove};
pub use policy::TabularPolicy;
pub use psro::solvers::MetaStrategySolver;
pub use psro::{
    aggregate_policy, fill_meta_game, run_psro, MetaGame, PayoffTensor, Population, PsroTrace,
};
