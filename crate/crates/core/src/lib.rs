//! Maker-Breaker odd-cycle games on graphs.
//!
//! The crate is layered bottom-up:
//!
//! - [`graph`]: the immutable [`Graph`] type and exact combinatorial
//!   primitives (connectivity, coloring, odd cycles, cuts, dense-subgraph
//!   extraction).
//! - [`decompose`]: the structural decompositions that turn a dense graph of
//!   large chromatic number into a highly connected bipartite core with an
//!   internal obstruction to 2-colorability.
//! - [`engine`]: the game state machine, win predicates, transcripts and the
//!   [`Strategy`](engine::Strategy) interface.
//! - [`strategies`]: Maker strategies that turn the decompositions into wins,
//!   plus adversarial Breakers.
//! - [`solver`]: exhaustive ground truth for tiny boards.

pub mod decompose;
pub mod engine;
mod error;
pub mod graph;
pub mod rational;
pub mod solver;
pub mod strategies;

pub use error::{Error, Result};
pub use graph::{Graph, OddCycleWitness, VertexSet};
pub use rational::Rational;
