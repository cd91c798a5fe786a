//! Rank-3 Maker-Breaker games.
//!
//! A position is a hypergraph whose edges have at most three vertices plus
//! the player to move. Maker withdraws a vertex from every edge and wins once
//! some edge is emptied; Breaker deletes every edge through a vertex and wins
//! once no edge is left.
//!
//! [`solver::solve`] decides any position in polynomial time: it searches the
//! shortened game (where positions certified by [`classifier`] count as won
//! for Maker) four plies deep. [`oracle`] holds the exhaustive reference
//! searches used to check it.

pub mod classifier;
pub mod depth;
pub mod error;
pub mod hotpath;
pub mod hypergraph;
pub mod oracle;
pub mod solver;

pub use classifier::{classify, EndgameClass, EndgameTag};
pub use depth::{Depth, SDepth};
pub use error::{Error, Result};
pub use hotpath::{find_hot_path, HotPathWitness};
pub use hypergraph::{Edge, Game, Hypergraph, Player, VertexId, VirtualEdge};
pub use solver::{best_move, evaluate_children, solve, SolveResult};
