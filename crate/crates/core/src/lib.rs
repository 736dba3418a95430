//! Online size Ramsey games on paths.
//!
//! The crate provides the colored host graph, the game rules and drivers,
//! the two Builder strategies, Painter adversaries, a verification harness
//! and an exact solver for tiny parameters.

pub mod board;
pub mod game;
pub mod painters;
pub mod paths;
pub mod solver;
pub mod strategy;
pub mod verify;
