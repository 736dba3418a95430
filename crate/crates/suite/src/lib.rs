//! Independent oracles for `ramsey-core`, plus the acceptance run in `tests/`.
//!
//! Nothing here calls into the code under test to compute expected values:
//! paths are enumerated one by one and isomorphism is decided by petgraph.

pub mod brute;
pub mod iso;
