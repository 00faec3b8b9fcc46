//! Exact rationals, canonical continued fractions and continuant matrices.

mod continuant;
mod expansion;
mod fraction;

pub use continuant::{continuant_product, ContinuantMatrix};
pub use expansion::{cost, evaluate, expand, CfExpansion};
pub use fraction::{reduce, Fraction};
