//! Bounded partial quotients: membership in `R_A`, enumeration of `R_A` and of
//! the generator semigroup, the congruence-constrained witness search, and
//! exceptional-set surveys.

mod enumerate;
mod membership;
mod oracle;
mod survey;

pub use enumerate::{enumerate_by_denominator, enumerate_semigroup_ball, BallElement};
pub use membership::{is_member, QuotientBound, TailConvention};
pub use oracle::{
    choose_strategy, find_witness, find_witness_with, OracleQuery, OracleResult, Outcome, Strategy,
};
pub use survey::{scan_exceptional, Congruence, ExceptionalSetReport, ScanOptions, ScanRow};
