//! Tooling around the `rank3` engine: game files, generators, the benchmark
//! harness and the JSON game service behind the `rank3` binary.

pub mod bench;
pub mod gamefile;
pub mod generators;
pub mod service;
pub mod verify;

pub use gamefile::{game_from_labels, parse_game, write_game, ParseError, ParsedGame};
pub use generators::{
    gen_extremal, gen_random, gen_random_with, GenError, RandomGame, SizeWeights,
};
