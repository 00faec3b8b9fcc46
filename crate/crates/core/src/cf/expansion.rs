use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::Fraction;
use crate::error::{Error, Result};

/// Canonical finite continued fraction `[a1, ..., an]` of a value in `[0, 1)`.
///
/// Every quotient is at least 1 and the last one is at least 2, which makes
/// the expansion of each rational unique. The empty expansion is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CfExpansion {
    quotients: Vec<BigUint>,
}

impl CfExpansion {
    pub fn new(quotients: Vec<BigUint>) -> Result<Self> {
        if quotients.iter().any(Zero::is_zero) {
            return Err(Error::InvalidExpansion("partial quotients must be positive".into()));
        }
        if let Some(last) = quotients.last() {
            if *last < BigUint::from(2u8) {
                return Err(Error::InvalidExpansion("last partial quotient must be at least 2".into()));
            }
        }
        Ok(CfExpansion { quotients })
    }

    pub fn from_u64s(quotients: &[u64]) -> Result<Self> {
        Self::new(quotients.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn sum(&self) -> BigUint {
        self.quotients.iter().sum()
    }

    pub fn max_quotient(&self) -> Option<&BigUint> {
        self.quotients.iter().max()
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.quotients.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for CfExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(CfExpansion::default());
        }
        let quotients = inner
            .split(',')
            .map(|t| t.trim().parse::<BigUint>().map_err(|_| Error::Parse(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        CfExpansion::new(quotients)
    }
}

/// Canonical expansion of `x` by the Euclidean algorithm.
pub fn expand(x: &Fraction) -> Result<CfExpansion> {
    if x.is_negative() || x.numer() >= x.denom() {
        return Err(Error::OutOfRange {
            value: x.to_string(),
            range: "[0, 1)",
        });
    }
    let mut num = x.numer().magnitude().clone();
    let mut den = x.denom().magnitude().clone();
    let mut quotients = Vec::new();
    while !num.is_zero() {
        let a = &den / &num;
        let r = &den - &a * &num;
        quotients.push(a);
        den = std::mem::replace(&mut num, r);
    }
    Ok(CfExpansion { quotients })
}

/// Exact value of an expansion, computed through the convergent recurrence.
pub fn evaluate(e: &CfExpansion) -> Fraction {
    // (p_{k-1}, q_{k-1}) and (p_k, q_k), seeded with p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (BigUint::zero(), BigUint::one());
    for a in &e.quotients {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Fraction::new(BigInt::from(p), BigInt::from(q)).expect("continuant denominator is positive")
}

/// Sum of the partial quotients of the fractional part of `|x|`.
pub fn cost(x: &Fraction) -> BigUint {
    expand(&x.abs().fract())
        .expect("fractional part lies in [0, 1)")
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn qs(e: &CfExpansion) -> Vec<u64> {
        e.quotients().iter().map(|a| u64::try_from(a).unwrap()).collect()
    }

    /// Bottom-up evaluation 1/(a1 + 1/(a2 + ...)) in plain fraction arithmetic.
    fn nested_value(quotients: &[u64]) -> Fraction {
        let mut acc = Fraction::zero();
        for &a in quotients.iter().rev() {
            let denom = &Fraction::from_integer(a) + &acc;
            acc = Fraction::new(denom.denom().clone(), denom.numer().clone()).unwrap();
        }
        acc
    }

    #[test]
    fn expand_examples() {
        assert!(expand(&f(0, 1)).unwrap().is_empty());
        assert_eq!(qs(&expand(&f(1, 2)).unwrap()), vec![2]);
        assert_eq!(qs(&expand(&f(4, 11)).unwrap()), vec![2, 1, 3]);
    }

    #[test]
    fn expand_rejects_out_of_range() {
        assert!(expand(&f(1, 1)).is_err());
        assert!(expand(&f(7, 5)).is_err());
        assert!(expand(&f(-1, 3)).is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&CfExpansion::default()), f(0, 1));
        assert_eq!(evaluate(&CfExpansion::from_u64s(&[2]).unwrap()), f(1, 2));
        let e = CfExpansion::from_u64s(&[1, 1, 2]).unwrap();
        assert_eq!(nested_value(&[1, 1, 2]), f(3, 5));
        assert_eq!(evaluate(&e), f(3, 5));
    }

    #[test]
    fn cost_examples() {
        assert_eq!(cost(&f(1, 2)), BigUint::from(2u8));
        assert_eq!(cost(&f(4, 11)), BigUint::from(6u8));
        assert_eq!(cost(&f(-4, 11)), BigUint::from(6u8));
        assert_eq!(cost(&f(0, 1)), BigUint::zero());
        // fractional part of 15/11 is 4/11
        assert_eq!(cost(&f(15, 11)), BigUint::from(6u8));
    }

    #[test]
    fn non_canonical_expansions_rejected() {
        assert!(CfExpansion::from_u64s(&[1]).is_err());
        assert!(CfExpansion::from_u64s(&[2, 1]).is_err());
        assert!(CfExpansion::from_u64s(&[0, 3]).is_err());
        assert!(CfExpansion::from_u64s(&[1, 3]).is_ok());
    }

    #[test]
    fn text_form() {
        let e = CfExpansion::from_u64s(&[2, 1, 3]).unwrap();
        assert_eq!(e.to_string(), "[2,1,3]");
        assert_eq!("[2, 1,3]".parse::<CfExpansion>().unwrap(), e);
        assert_eq!("[]".parse::<CfExpansion>().unwrap(), CfExpansion::default());
        assert!("[2,1]".parse::<CfExpansion>().is_err());
        assert!("2,1,3".parse::<CfExpansion>().is_err());
    }

    #[test]
    fn convergent_denominators_follow_recurrence() {
        let e = expand(&f(1234, 4567)).unwrap();
        let a = qs(&e);
        let mut dens = vec![1u64, a[0]];
        for k in 1..a.len() {
            let next = a[k] * dens[k] + dens[k - 1];
            dens.push(next);
        }
        for k in 2..dens.len() {
            assert!(dens[k] > dens[k - 1]);
        }
        assert_eq!(*dens.last().unwrap(), 4567);
    }

    proptest! {
        #[test]
        fn round_trip(q in 2u64..100_000, b in 0u64..100_000) {
            let x = f((b % q) as i64, q as i64);
            let e = expand(&x).unwrap();
            prop_assert_eq!(evaluate(&e), x.clone());
            prop_assert_eq!(nested_value(&qs(&e)), x);
            if let Some(last) = e.quotients().last() {
                prop_assert!(*last >= BigUint::from(2u8));
            }
        }

        #[test]
        fn cost_dominates_log2(q in 2u64..1_000_000, b in 1u64..1_000_000) {
            let x = f((b % (q - 1) + 1) as i64, q as i64);
            let c = cost(&x);
            let bound = BigUint::one() << usize::try_from(&c).unwrap();
            prop_assert!(bound >= BigUint::from(u64::try_from(x.denom()).unwrap()));
        }
    }
}
