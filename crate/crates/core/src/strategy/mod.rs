//! Builder strategies and the bookkeeping they rely on.

pub mod good;
pub mod p4;
pub mod pk;
