use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cf::{cost, Fraction};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: &Fraction) -> Self {
        if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply(self, x: &Fraction) -> Fraction {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

/// `±value` with `0 < value < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTerm {
    pub sign: Sign,
    pub value: Fraction,
}

impl SignedTerm {
    pub fn new(sign: Sign, value: Fraction) -> Result<Self> {
        if !value.is_proper_positive() {
            return Err(Error::OutOfRange {
                value: value.to_string(),
                range: "(0, 1)",
            });
        }
        Ok(SignedTerm { sign, value })
    }

    /// The term as a signed fraction.
    pub fn signed_value(&self) -> Fraction {
        self.sign.apply(&self.value)
    }
}

/// A finite signed sum of fractions in `(0, 1)` equal to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub target: Fraction,
    pub terms: Vec<SignedTerm>,
    /// Sum of the partial quotients of every term.
    pub total_cost: BigUint,
}

impl Representation {
    pub fn new(target: Fraction, terms: Vec<SignedTerm>) -> Self {
        let total_cost = terms.iter().map(|t| cost(&t.value)).sum();
        Representation {
            target,
            terms,
            total_cost,
        }
    }

    pub fn sum(&self) -> Fraction {
        self.terms.iter().map(SignedTerm::signed_value).sum()
    }

    pub fn negative_terms(&self) -> usize {
        self.terms.iter().filter(|t| t.sign == Sign::Minus).count()
    }
}

/// Outcome of an independent re-check of a representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub terms: usize,
    pub total_cost: BigUint,
    /// `total_cost / ln(den(target))`; absent when the denominator is 1.
    pub cost_over_ln_q: Option<f64>,
}

/// Natural logarithm of a positive big integer.
pub(crate) fn ln_big(n: &BigUint) -> f64 {
    match n.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let shift = n.bits().saturating_sub(64);
            (n >> shift).to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Recomputes the sum and every cost from scratch.
pub fn verify(rep: &Representation) -> Result<Verification> {
    let mut total = BigUint::zero();
    let mut sum = Fraction::zero();
    for (i, term) in rep.terms.iter().enumerate() {
        let v = &term.value;
        if !v.is_proper_positive() {
            return Err(Error::Verification(format!("term {i} ({v}) is outside (0, 1)")));
        }
        if !v.numer().gcd(v.denom()).is_one() {
            return Err(Error::Verification(format!("term {i} ({v}) is not reduced")));
        }
        total += cost(v);
        sum = &sum + &term.signed_value();
    }
    if sum != rep.target {
        return Err(Error::Verification(format!(
            "terms sum to {sum}, expected {}",
            rep.target
        )));
    }
    if total != rep.total_cost {
        return Err(Error::Verification(format!(
            "recorded cost {} differs from recomputed {total}",
            rep.total_cost
        )));
    }
    let den = rep.target.denom_unsigned();
    let cost_over_ln_q = (!den.is_one()).then(|| total.to_f64().unwrap_or(f64::INFINITY) / ln_big(&den));
    Ok(Verification {
        terms: rep.terms.len(),
        total_cost: total,
        cost_over_ln_q,
    })
}
