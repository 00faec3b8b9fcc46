//! Exact continued fractions, bounded partial quotients, and signed
//! decompositions of rationals into fractions with small partial quotients.

pub mod cf;
pub mod decompose;
pub mod error;
pub mod experiments;
mod pool;
pub mod zaremba;

pub use error::{Error, Result};
