use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::primes::{select_primes, PrimeSelection};
use super::representation::{Sign, SignedTerm};
use super::{DecomposeConfig, DecomposeFailure};
use crate::cf::Fraction;
use crate::error::{Error, Result};
use crate::zaremba::{find_witness, OracleQuery, Outcome, QuotientBound, Strategy};

/// One witness search inside a split.
#[derive(Clone, Debug, Serialize)]
pub struct SplitStep {
    /// Auxiliary primes still dividing the working denominator (all of them in step 0).
    pub support: Vec<u64>,
    /// Full denominator of the emitted term.
    pub denominator: u128,
    pub modulus: u128,
    pub residue: i128,
    pub witness: u128,
    pub sign: Sign,
    pub candidates_scanned: u64,
    pub method: Strategy,
}

/// One choice of primes and everything it produced.
#[derive(Clone, Debug, Serialize)]
pub struct SplitAttempt {
    pub bound: u64,
    pub selection: Option<PrimeSelection>,
    pub steps: Vec<SplitStep>,
    /// Set on success.
    #[serde(serialize_with = "serialize_opt_fraction")]
    pub remainder: Option<Fraction>,
    /// Set on failure.
    pub failure: Option<String>,
}

/// Full history of one split, including failed attempts and bound escalations.
#[derive(Clone, Debug, Serialize)]
pub struct SplitTrace {
    #[serde(serialize_with = "serialize_fraction")]
    pub input: Fraction,
    /// 1-based position of this split in its decomposition.
    pub depth: usize,
    pub attempts: Vec<SplitAttempt>,
}

impl SplitTrace {
    /// The last attempt; the successful one when the split succeeded.
    pub fn last_attempt(&self) -> Option<&SplitAttempt> {
        self.attempts.last()
    }

    /// Bound `A` in force for the last attempt.
    pub fn bound(&self) -> Option<u64> {
        self.last_attempt().map(|a| a.bound)
    }

    pub fn resamples(&self) -> usize {
        self.attempts.len().saturating_sub(1)
    }
}

pub(crate) fn serialize_fraction<S: serde::Serializer>(x: &Fraction, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn serialize_opt_fraction<S: serde::Serializer>(
    x: &Option<Fraction>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    /// Terms lying in `R_A` for the bound recorded in the trace.
    pub main_terms: Vec<SignedTerm>,
    /// Zero, or a fraction in `(-1, 1)` whose denominator is below `sqrt(den(x))`.
    pub remainder: Fraction,
    pub trace: SplitTrace,
}

/// Splits `x = b/q` into bounded-quotient terms plus a remainder with
/// denominator below `sqrt(q)`, resampling primes when a witness search fails.
pub fn split(x: &Fraction, cfg: &DecomposeConfig) -> Result<SplitOutcome> {
    let mut trace = SplitTrace {
        input: x.clone(),
        depth: 1,
        attempts: Vec::new(),
    };
    match split_at_bound(x, cfg, cfg.bound, &mut trace)? {
        Some((main_terms, remainder)) => Ok(SplitOutcome {
            main_terms,
            remainder,
            trace,
        }),
        None => Err(split_failure(x, cfg.bound, trace)),
    }
}

pub(crate) fn split_failure(x: &Fraction, bound: QuotientBound, trace: SplitTrace) -> Error {
    Error::Decomposition(Box::new(DecomposeFailure {
        reason: format!(
            "no split of {x} with A = {bound} after {} prime selections",
            trace.attempts.len()
        ),
        traces: vec![trace],
    }))
}

type Split = (Vec<SignedTerm>, Fraction);

/// Runs up to `1 + max_prime_resamples` attempts at one bound, appending them
/// to `trace`. `Ok(None)` means every attempt hit a witness failure.
pub(crate) fn split_at_bound(
    x: &Fraction,
    cfg: &DecomposeConfig,
    bound: QuotientBound,
    trace: &mut SplitTrace,
) -> Result<Option<Split>> {
    if !x.is_proper_positive() {
        return Err(Error::OutOfRange {
            value: x.to_string(),
            range: "(0, 1)",
        });
    }
    let q = x.denom_unsigned();
    if q <= BigUint::from(cfg.base_threshold) {
        return Err(Error::Config(format!(
            "split needs a denominator above the base threshold {}, got {q}",
            cfg.base_threshold
        )));
    }
    for attempt in 0..=cfg.max_prime_resamples {
        let mut record = SplitAttempt {
            bound: bound.get(),
            selection: None,
            steps: Vec::new(),
            remainder: None,
            failure: None,
        };
        let outcome = run_attempt(x, &q, cfg, bound, attempt, &mut record);
        match outcome {
            Ok(Some(found)) => {
                record.remainder = Some(found.1.clone());
                trace.attempts.push(record);
                return Ok(Some(found));
            }
            Ok(None) => trace.attempts.push(record),
            Err(e) => {
                record.failure = Some(e.to_string());
                trace.attempts.push(record);
                return Err(e);
            }
        }
    }
    Ok(None)
}

fn to_u128(n: &BigUint) -> Result<u128> {
    n.to_u128().ok_or_else(|| Error::Overflow(n.to_string()))
}

fn invariant(msg: String) -> Error {
    Error::Verification(msg)
}

fn run_attempt(
    x: &Fraction,
    q: &BigUint,
    cfg: &DecomposeConfig,
    bound: QuotientBound,
    attempt: u32,
    record: &mut SplitAttempt,
) -> Result<Option<Split>> {
    let selection = select_primes(q, cfg, attempt)?;
    let primes = selection.primes.clone();
    record.selection = Some(selection);

    let q_small = to_u128(q)?;
    let prime_product = primes
        .iter()
        .try_fold(1u128, |acc, &p| acc.checked_mul(u128::from(p)))
        .ok_or_else(|| Error::Overflow(format!("product of {primes:?}")))?;
    let full = q_small
        .checked_mul(prime_product)
        .ok_or_else(|| Error::Overflow(format!("{q} * {prime_product}")))?;

    // b0 ≡ b * Πp (mod q) over the denominator q * Πp
    let b = x.numer().magnitude();
    let residue = (b * BigUint::from(prime_product)) % q;
    let residue = residue.to_i128().expect("residue below q fits");
    let query = OracleQuery::new(full, bound, q_small, residue)?;
    let result = find_witness(&query, cfg.oracle_budget);
    let Some(b0) = result.witness else {
        record.failure = Some(witness_failure(&query, result.outcome, 0));
        return Ok(None);
    };
    let mut terms = vec![SignedTerm::new(Sign::Plus, Fraction::new(b0, full)?)?];
    record.steps.push(SplitStep {
        support: primes.clone(),
        denominator: full,
        modulus: q_small,
        residue,
        witness: b0,
        sign: Sign::Plus,
        candidates_scanned: result.candidates_scanned,
        method: result.method,
    });
    let mut remainder = x - &terms[0].value;
    let den = to_u128(&remainder.denom_unsigned())?;
    if prime_product % den != 0 {
        return Err(invariant(format!(
            "remainder {remainder} kept a factor of q after the main term {}",
            terms[0].value
        )));
    }
    check_exact(x, &terms, &remainder)?;

    let mut support: Vec<u64> = primes.iter().copied().filter(|&p| den % u128::from(p) == 0).collect();
    while BigUint::from(to_u128(&remainder.denom_unsigned())?).pow(2) >= *q {
        let den = to_u128(&remainder.denom_unsigned())?;
        let product: u128 = support.iter().map(|&p| u128::from(p)).product();
        if product != den {
            return Err(invariant(format!(
                "remainder denominator {den} is not the product of its support {support:?}"
            )));
        }
        let pivot = *support.last().expect("denominator above 1 has support");
        let sign = Sign::of(&remainder);
        let numer = to_u128(remainder.numer().magnitude())?;
        let residue = (numer % u128::from(pivot)) as i128;
        let query = OracleQuery::new(den, bound, pivot.into(), residue)?;
        let result = find_witness(&query, cfg.oracle_budget);
        let Some(witness) = result.witness else {
            record.failure = Some(witness_failure(&query, result.outcome, record.steps.len()));
            return Ok(None);
        };
        let term = SignedTerm::new(sign, Fraction::new(witness, den)?)?;
        record.steps.push(SplitStep {
            support: support.clone(),
            denominator: den,
            modulus: pivot.into(),
            residue,
            witness,
            sign,
            candidates_scanned: result.candidates_scanned,
            method: result.method,
        });
        remainder = &remainder - &term.signed_value();
        terms.push(term);
        let next_den = to_u128(&remainder.denom_unsigned())?;
        if (den / u128::from(pivot)) % next_den != 0 {
            return Err(invariant(format!(
                "remainder denominator {next_den} does not divide {den}/{pivot}"
            )));
        }
        support.retain(|&p| next_den % u128::from(p) == 0);
        check_exact(x, &terms, &remainder)?;
    }
    Ok(Some((terms, remainder)))
}

fn witness_failure(query: &OracleQuery, outcome: Outcome, step: usize) -> String {
    let why = match outcome {
        Outcome::BudgetExceeded => "scan budget exhausted",
        _ => "residue class holds no witness",
    };
    format!(
        "step {step}: {why} for denominator {} modulo {} residue {}",
        query.q, query.modulus, query.residue
    )
}

pub(crate) fn check_exact(target: &Fraction, terms: &[SignedTerm], remainder: &Fraction) -> Result<()> {
    let total: Fraction = terms.iter().map(SignedTerm::signed_value).sum();
    if &(&total + remainder) != target {
        return Err(invariant(format!(
            "terms plus remainder give {} instead of {target}",
            &total + remainder
        )));
    }
    Ok(())
}
