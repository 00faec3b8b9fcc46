//! Signed decomposition of a rational into fractions with bounded partial
//! quotients.
//!
//! A split of `b/q` multiplies numerator and denominator by auxiliary primes
//! `p_1..p_r`, finds `b0 ≡ b·Πp (mod q)` with `b0/(q·Πp)` in `R_A`, and leaves a
//! remainder over `Πp` only. Further witness searches modulo the largest
//! remaining prime strip primes off the remainder until its denominator drops
//! below `sqrt(q)`. Decomposition repeats this on the remainder until the
//! denominator reaches the base threshold.

mod config;
mod min_cost;
mod primes;
mod representation;
mod split;

use std::fmt;

use num_bigint::BigUint;

pub use config::DecomposeConfig;
pub use min_cost::{min_cost_oracle, MinCost};
pub use primes::{prime_window, primes_between, select_primes, PrimeSelection};
pub use representation::{verify, Representation, Sign, SignedTerm, Verification};
pub(crate) use representation::ln_big;
pub use split::{split, SplitAttempt, SplitOutcome, SplitStep, SplitTrace};

use crate::cf::Fraction;
use crate::error::{Error, Result};
use split::{check_exact, split_at_bound, split_failure};

/// A failed decomposition with the history of every split that was tried.
#[derive(Debug)]
pub struct DecomposeFailure {
    pub reason: String,
    pub traces: Vec<SplitTrace>,
}

impl fmt::Display for DecomposeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub representation: Representation,
    /// One per split, in order.
    pub traces: Vec<SplitTrace>,
}

impl Decomposition {
    /// Number of splits performed.
    pub fn depth(&self) -> usize {
        self.traces.len()
    }

    /// Largest quotient bound any split needed.
    pub fn max_bound_used(&self) -> Option<u64> {
        self.traces.iter().filter_map(SplitTrace::bound).max()
    }
}

/// Decomposes `x ∈ (0, 1)` into a signed sum of fractions.
///
/// Every split's main terms lie in `R_A`, where `A` starts at `cfg.bound` and
/// rises by `cfg.escalation_step` (up to `cfg.max_bound`) whenever a split
/// runs out of prime resamples. The final working fraction, with denominator
/// at most `cfg.base_threshold`, is emitted unchanged.
pub fn decompose(x: &Fraction, cfg: &DecomposeConfig) -> Result<Decomposition> {
    cfg.validate()?;
    if !x.is_proper_positive() {
        return Err(Error::OutOfRange {
            value: x.to_string(),
            range: "(0, 1)",
        });
    }
    let threshold = BigUint::from(cfg.base_threshold);
    let mut terms: Vec<SignedTerm> = Vec::new();
    let mut traces: Vec<SplitTrace> = Vec::new();
    let mut work = x.clone();
    let mut sign = Sign::Plus;
    loop {
        if work.denom_unsigned() <= threshold {
            terms.push(SignedTerm::new(sign, work)?);
            break;
        }
        let mut trace = SplitTrace {
            input: work.clone(),
            depth: traces.len() + 1,
            attempts: Vec::new(),
        };
        let mut bound = cfg.bound;
        let (main, remainder) = loop {
            match split_at_bound(&work, cfg, bound, &mut trace) {
                Ok(Some(found)) => break found,
                Ok(None) if bound.get() + cfg.escalation_step <= cfg.max_bound && cfg.escalation_step > 0 => {
                    bound = bound.escalate(cfg.escalation_step);
                }
                Ok(None) => {
                    let Error::Decomposition(mut failure) = split_failure(&work, bound, trace) else {
                        unreachable!("split_failure builds a decomposition error")
                    };
                    failure.reason = format!("decomposing {x}: {}", failure.reason);
                    traces.append(&mut failure.traces);
                    failure.traces = traces;
                    return Err(Error::Decomposition(failure));
                }
                Err(e) => {
                    traces.push(trace);
                    return Err(Error::Decomposition(Box::new(DecomposeFailure {
                        reason: format!("decomposing {x}: {e}"),
                        traces,
                    })));
                }
            }
        };
        terms.extend(main.into_iter().map(|t| SignedTerm {
            sign: sign * t.sign,
            value: t.value,
        }));
        traces.push(trace);
        check_exact(x, &terms, &sign.apply(&remainder))?;
        if remainder.is_zero() {
            break;
        }
        sign = sign * Sign::of(&remainder);
        work = remainder.abs();
    }
    Ok(Decomposition {
        representation: Representation::new(x.clone(), terms),
        traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::cost;
    use crate::zaremba::{is_member, QuotientBound, TailConvention};

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn base_case_is_single_term() {
        let d = decompose(&f(3, 7), &DecomposeConfig::default()).unwrap();
        let rep = &d.representation;
        assert_eq!(rep.terms, vec![SignedTerm::new(Sign::Plus, f(3, 7)).unwrap()]);
        assert_eq!(rep.total_cost, BigUint::from(5u8));
        assert_eq!(d.depth(), 0);
        assert_eq!(verify(rep).unwrap().total_cost, BigUint::from(5u8));
    }

    #[test]
    fn all_small_denominators_pass_through() {
        let cfg = DecomposeConfig::default();
        for q in 2..=100i64 {
            for b in 1..q {
                let x = f(b, q);
                let d = decompose(&x, &cfg).unwrap();
                assert_eq!(d.representation.terms.len(), 1);
                assert_eq!(d.representation.terms[0].value, x);
            }
        }
    }

    #[test]
    fn rejects_values_outside_unit_interval() {
        let cfg = DecomposeConfig::default();
        assert!(decompose(&Fraction::zero(), &cfg).is_err());
        assert!(decompose(&f(1, 1), &cfg).is_err());
        assert!(decompose(&f(-1, 300), &cfg).is_err());
    }

    #[test]
    fn split_properties_hold() {
        let cfg = DecomposeConfig::default();
        for q in [101i64, 257, 1000, 4099, 9973, 65_537] {
            for b in [1, 2, q / 3, q / 2 + 1, q - 1] {
                let x = f(b, q);
                if x.denom() != &q.into() {
                    continue;
                }
                let out = split(&x, &cfg).unwrap();
                let sum: Fraction = out.main_terms.iter().map(SignedTerm::signed_value).sum();
                assert_eq!(&sum + &out.remainder, x);
                let rd = out.remainder.denom_unsigned();
                assert!(&rd * &rd < BigUint::from(q as u64), "{x}: remainder {}", out.remainder);
                let a = QuotientBound::new(out.trace.bound().unwrap()).unwrap();
                for t in &out.main_terms {
                    assert!(is_member(&t.value, a, TailConvention::Strict).unwrap());
                }
                let steps = &out.trace.last_attempt().unwrap().steps;
                for w in steps.windows(2).skip(1) {
                    assert!(w[1].support.len() < w[0].support.len());
                }
                assert!(steps.len() <= 1 + cfg.r);
            }
        }
    }

    #[test]
    fn representation_is_exact_and_verifiable() {
        let cfg = DecomposeConfig::default();
        for (b, q) in [(1, 101), (355, 1130), (9999, 10_007), (12_345, 99_991), (1, 1_000_003)] {
            let x = f(b, q);
            let d = decompose(&x, &cfg).unwrap();
            assert_eq!(d.representation.sum(), x);
            let v = verify(&d.representation).unwrap();
            assert_eq!(v.total_cost, d.representation.terms.iter().map(|t| cost(&t.value)).sum());
        }
    }

    #[test]
    fn deterministic() {
        let cfg = DecomposeConfig::default();
        let x = f(7_777, 65_521);
        let a = decompose(&x, &cfg).unwrap();
        let b = decompose(&x, &cfg).unwrap();
        assert_eq!(a.representation, b.representation);
        assert_eq!(
            serde_json::to_string(&a.traces).unwrap(),
            serde_json::to_string(&b.traces).unwrap()
        );
    }

    #[test]
    fn budget_of_one_fails_with_trace() {
        let cfg = DecomposeConfig {
            oracle_budget: 1,
            max_prime_resamples: 1,
            ..DecomposeConfig::default()
        };
        let Err(Error::Decomposition(failure)) = decompose(&f(1234, 100_003), &cfg) else {
            panic!("expected failure")
        };
        let trace = failure.traces.last().unwrap();
        // bounds 5, 10, ..., 50, two prime selections each
        assert_eq!(trace.attempts.len(), 20);
        assert_eq!(trace.bound(), Some(50));
        assert!(trace.attempts.iter().all(|a| a.failure.as_deref().unwrap().contains("budget")));
    }

    #[test]
    fn zero_remainder_is_dropped() {
        let cfg = DecomposeConfig::default();
        let out = split(&f(6, 101), &cfg).unwrap();
        assert!(out.remainder.is_zero());
        assert_eq!(out.trace.last_attempt().unwrap().steps.len(), 2);
        let d = decompose(&f(6, 101), &cfg).unwrap();
        assert_eq!(d.representation.terms.len(), out.main_terms.len());
        assert!(d.representation.terms.iter().all(|t| !t.value.is_zero()));
        verify(&d.representation).unwrap();
    }

    #[test]
    fn negative_remainder_is_carried() {
        let cfg = DecomposeConfig::default();
        let out = split(&f(5, 101), &cfg).unwrap();
        assert_eq!(out.remainder, f(-2, 3));
        let d = decompose(&f(5, 101), &cfg).unwrap();
        let last = d.representation.terms.last().unwrap();
        assert_eq!(last, &SignedTerm::new(Sign::Minus, f(2, 3)).unwrap());
        assert_eq!(d.representation.sum(), f(5, 101));
        verify(&d.representation).unwrap();
    }
}
