use thiserror::Error;

use crate::hypergraph::{Player, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge has {arity} vertices, rank is limited to 3")]
    Rank { arity: usize },
    #[error("vertex {0} appears twice in one edge")]
    DuplicateVertex(VertexId),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: VertexId, count: usize },
    #[error("illegal move: vertex {vertex} is not in the game (vertex count {count})")]
    IllegalMove { vertex: VertexId, count: usize },
    #[error("it is {to_move}'s turn")]
    WrongPlayer { to_move: Player },
    #[error("game is over, no move available")]
    Terminal,
    #[error("withdrawn and deleted vertex sets intersect at {0}")]
    InvalidRestriction(VertexId),
    #[error("game has {vertices} vertices, oracle bound is {bound}")]
    BoundExceeded { vertices: usize, bound: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
