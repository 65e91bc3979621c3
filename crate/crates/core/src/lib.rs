//! Honest-party simulators for three matrix-based key establishment
//! protocols (a Shamir-style three-pass transport over `SL_4(Z)`, and two
//! commuting-matrix key agreements), together with passive attacks that
//! recover every session key from eavesdropped traffic.

pub mod arith;
pub mod attacks;
pub mod error;
pub mod harness;
pub mod json;
pub mod matlin;
pub mod polysys;
pub mod protocols;

pub use error::{Error, Result};
