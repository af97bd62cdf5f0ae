//! Snakes-and-ladders boards as absorbing Markov chains.
//!
//! - [`board`]: board definitions, redirects and the overshoot rule.
//! - [`chain`]: transition matrix, finish-time distributions, expectations.
//! - [`compete`]: pairwise win probabilities and intransitive triangles.
//! - [`simulate`]: seeded Monte Carlo cross-checks.
//! - [`dice`]: exact-arithmetic intransitive dice.
//! - [`report`]: CSV and JSON renderings used by the command-line tool.

pub mod board;
pub mod chain;
pub mod compete;
pub mod dice;
pub mod error;
pub mod report;
pub mod rng;
pub mod simulate;
pub mod stats;

pub use board::{Board, Overshoot, Square};
pub use chain::{DurationProfile, GameChain};
pub use compete::{Triangle, WinMatrix};
pub use error::{Error, Result};
