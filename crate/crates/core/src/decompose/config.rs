use crate::cf::Fraction;
use crate::error::{Error, Result};
use crate::zaremba::QuotientBound;

/// Parameters of the splitting construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposeConfig {
    /// Starting quotient bound `A` for emitted main terms.
    pub bound: QuotientBound,
    /// Exponent of the prime window `[q^δ/2, q^δ]`; `0 < δ < 1`.
    pub delta: Fraction,
    /// Number of auxiliary primes.
    pub r: usize,
    /// Fractions with denominator `<= base_threshold` are emitted verbatim.
    pub base_threshold: u64,
    /// Geometric widenings of an underpopulated prime window before `r` is reduced.
    pub widening_rounds: u32,
    pub max_prime_resamples: u32,
    /// Scan cap per witness search.
    pub oracle_budget: u64,
    /// `A` grows by this much after a split exhausts its prime resamples.
    pub escalation_step: u64,
    /// No escalation past this bound.
    pub max_bound: u64,
    pub seed: u64,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            bound: QuotientBound::new(5).expect("positive"),
            delta: Fraction::new(1, 4).expect("nonzero denominator"),
            r: 4,
            base_threshold: 100,
            widening_rounds: 3,
            max_prime_resamples: 8,
            oracle_budget: 50_000_000,
            escalation_step: 5,
            max_bound: 50,
            seed: 0,
        }
    }
}

impl DecomposeConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_proper_positive() {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.r == 0 {
            return Err(Error::Config("r must be at least 1".into()));
        }
        if self.base_threshold < 2 {
            return Err(Error::Config("base threshold must be at least 2".into()));
        }
        if self.oracle_budget == 0 {
            return Err(Error::Config("oracle budget must be positive".into()));
        }
        if self.max_bound < self.bound.get() {
            return Err(Error::Config(format!(
                "max bound {} is below the starting bound {}",
                self.max_bound, self.bound
            )));
        }
        Ok(())
    }
}
