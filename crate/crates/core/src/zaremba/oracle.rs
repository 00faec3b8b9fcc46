use std::ops::ControlFlow;

use num_integer::Integer;
use serde::Serialize;

use super::enumerate::walk_continuants;
use super::membership::coprime_within_bound;
use super::{QuotientBound, TailConvention};
use crate::error::{Error, Result};

/// Search problem: find `b` in `[1, q)` with `gcd(b, q) = 1`,
/// `b ≡ residue (mod modulus)` and `b/q ∈ R_A`.
///
/// `q` is the full denominator of the sought fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleQuery {
    pub q: u128,
    pub bound: QuotientBound,
    pub modulus: u128,
    pub residue: i128,
    pub tail: TailConvention,
}

impl OracleQuery {
    pub fn new(q: u128, bound: QuotientBound, modulus: u128, residue: i128) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidQuery("denominator must be positive".into()));
        }
        if modulus == 0 {
            return Err(Error::InvalidQuery("modulus must be positive".into()));
        }
        if modulus > 1 && residue.unsigned_abs().gcd(&modulus) != 1 {
            return Err(Error::InvalidQuery(format!(
                "residue {residue} is not coprime to modulus {modulus}"
            )));
        }
        Ok(OracleQuery {
            q,
            bound,
            modulus,
            residue,
            tail: TailConvention::Strict,
        })
    }

    /// Unconstrained query (`modulus = 1`).
    pub fn unconstrained(q: u128, bound: QuotientBound) -> Result<Self> {
        Self::new(q, bound, 1, 0)
    }

    pub fn with_tail(mut self, tail: TailConvention) -> Self {
        self.tail = tail;
        self
    }

    /// Smallest positive member of the residue class.
    fn first_term(&self) -> u128 {
        // modulus fits i128 whenever a residue class is meaningful at desk scale
        let m = i128::try_from(self.modulus).unwrap_or(i128::MAX);
        match self.residue.rem_euclid(m) as u128 {
            0 => self.modulus,
            r => r,
        }
    }

    /// Number of progression terms `<= limit`.
    fn terms_up_to(&self, limit: u128) -> u128 {
        let start = self.first_term();
        if limit < start {
            0
        } else {
            (limit - start) / self.modulus + 1
        }
    }

    /// Length of the progression `{residue + k*modulus} ∩ [1, q)`.
    pub fn progression_len(&self) -> u128 {
        self.terms_up_to(self.q - 1)
    }

    /// Terms that cannot qualify because their first quotient `floor(q/b)` is too large.
    fn rejected_prefix(&self) -> u128 {
        let cut = match self.tail {
            TailConvention::Strict => self.bound.get() + 1,
            TailConvention::Lenient => self.bound.get() + 2,
        };
        self.terms_up_to(self.q / u128::from(cut)).min(self.progression_len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Ascending scan of the residue class.
    Progression,
    /// Depth-first walk of the continuant tree up to `q`.
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    /// The whole search space was covered without a witness.
    Exhausted,
    /// The scan cap was reached first; nothing is known about existence.
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub witness: Option<u128>,
    /// Progression terms decided (including those rejected by the first-quotient
    /// cut) or continuant-tree nodes visited, depending on `method`.
    pub candidates_scanned: u64,
    pub method: Strategy,
    pub outcome: Outcome,
}

// Hausdorff dimensions of the bounded-quotient Cantor sets, A = 1..=10.
const DIMENSIONS: [f64; 10] = [
    0.0, 0.5313, 0.7057, 0.7889, 0.8368, 0.8676, 0.8889, 0.9045, 0.9164, 0.9257,
];

fn dimension(bound: QuotientBound) -> f64 {
    let a = bound.get();
    match DIMENSIONS.get((a - 1) as usize) {
        Some(&d) => d,
        None => 1.0 - 6.0 / (std::f64::consts::PI.powi(2) * a as f64),
    }
}

/// Picks the strategy with the smaller predicted amount of work.
pub fn choose_strategy(query: &OracleQuery) -> Strategy {
    let progression = (query.progression_len() - query.rejected_prefix()) as f64;
    let enumeration = (query.q as f64).powf(2.0 * dimension(query.bound));
    if enumeration < progression {
        Strategy::Enumeration
    } else {
        Strategy::Progression
    }
}

/// Smallest witness for `query`, scanning at most `budget` candidates.
pub fn find_witness(query: &OracleQuery, budget: u64) -> OracleResult {
    find_witness_with(query, budget, choose_strategy(query))
}

pub fn find_witness_with(query: &OracleQuery, budget: u64, strategy: Strategy) -> OracleResult {
    match strategy {
        Strategy::Progression => scan_progression(query, budget),
        Strategy::Enumeration => scan_tree(query, budget),
    }
}

fn scan_progression(query: &OracleQuery, budget: u64) -> OracleResult {
    let total = query.progression_len();
    let skipped = query.rejected_prefix();
    let budget = u128::from(budget);
    let result = |witness, scanned: u128, outcome| OracleResult {
        witness,
        candidates_scanned: u64::try_from(scanned).unwrap_or(u64::MAX),
        method: Strategy::Progression,
        outcome,
    };
    if skipped > budget {
        return result(None, budget, Outcome::BudgetExceeded);
    }
    let start = query.first_term();
    let mut scanned = skipped;
    let mut b = start + skipped * query.modulus;
    while scanned < total {
        if scanned == budget {
            return result(None, scanned, Outcome::BudgetExceeded);
        }
        scanned += 1;
        if coprime_within_bound(b, query.q, query.bound.get(), query.tail) {
            return result(Some(b), scanned, Outcome::Found);
        }
        b += query.modulus;
    }
    result(None, scanned, Outcome::Exhausted)
}

fn scan_tree(query: &OracleQuery, budget: u64) -> OracleResult {
    let modulus = i128::try_from(query.modulus).unwrap_or(i128::MAX);
    let target = query.residue.rem_euclid(modulus);
    let mut best: Option<u128> = None;
    let mut over_budget = false;
    let mut seen = 0u64;
    let visited = walk_continuants(query.q, query.bound, |node| {
        seen += 1;
        if seen > budget {
            over_budget = true;
            return ControlFlow::Break(());
        }
        let tail_ok = match query.tail {
            TailConvention::Strict => node.last() >= 2,
            TailConvention::Lenient => node.last() >= 2 || node.word.len() >= 2,
        };
        if node.q == query.q
            && tail_ok
            && (node.p as i128).rem_euclid(modulus) == target
            && best.is_none_or(|b| node.p < b)
        {
            best = Some(node.p);
        }
        ControlFlow::Continue(())
    });
    let outcome = match (over_budget, best) {
        (true, _) => Outcome::BudgetExceeded,
        (false, Some(_)) => Outcome::Found,
        (false, None) => Outcome::Exhausted,
    };
    OracleResult {
        witness: if over_budget { None } else { best },
        candidates_scanned: visited.min(budget),
        method: Strategy::Enumeration,
        outcome,
    }
}
