use std::fmt;

use num_bigint::BigUint;

use crate::cf::{expand, Fraction};
use crate::error::{Error, Result};

/// Upper bound `A` on partial quotients; `A >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientBound(u64);

impl QuotientBound {
    pub fn new(a: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidBound(a));
        }
        Ok(QuotientBound(a))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn escalate(self, step: u64) -> Self {
        QuotientBound(self.0.saturating_add(step))
    }
}

impl fmt::Display for QuotientBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which tail form of an expansion is tested against the bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TailConvention {
    /// Only the canonical expansion (last quotient >= 2).
    #[default]
    Strict,
    /// The canonical expansion or its variant `[..., a_n - 1, 1]`.
    Lenient,
}

/// Whether `x` lies in `R_A` under the given tail convention.
pub fn is_member(x: &Fraction, bound: QuotientBound, tail: TailConvention) -> Result<bool> {
    if !x.is_proper_positive() {
        return Err(Error::OutOfRange {
            value: x.to_string(),
            range: "(0, 1)",
        });
    }
    let e = expand(x)?;
    let a = BigUint::from(bound.get());
    let (last, prefix) = e.quotients().split_last().expect("non-zero value has quotients");
    let prefix_ok = prefix.iter().all(|q| *q <= a);
    Ok(match tail {
        TailConvention::Strict => prefix_ok && *last <= a,
        TailConvention::Lenient => prefix_ok && *last <= &a + 1u32,
    })
}

/// Machine-integer membership test used by the search routines.
///
/// True iff `gcd(b, q) = 1`, `0 < b < q` and `b/q` lies in `R_A`. Stops at the
/// first quotient that breaks the bound.
#[inline]
pub(crate) fn coprime_within_bound(b: u128, q: u128, bound: u64, tail: TailConvention) -> bool {
    if b == 0 || b >= q {
        return false;
    }
    let a_max = u128::from(bound);
    let (mut den, mut num) = (q, b);
    loop {
        let a = den / num;
        let r = den - a * num;
        if r == 0 {
            let last_ok = match tail {
                TailConvention::Strict => a <= a_max,
                TailConvention::Lenient => a <= a_max + 1,
            };
            return num == 1 && last_ok;
        }
        if a > a_max {
            return false;
        }
        den = num;
        num = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn bound(a: u64) -> QuotientBound {
        QuotientBound::new(a).unwrap()
    }

    #[test]
    fn membership_examples() {
        let strict = TailConvention::Strict;
        assert!(is_member(&f(3, 5), bound(2), strict).unwrap());
        assert!(!is_member(&f(1, 7), bound(5), strict).unwrap());
        assert!(is_member(&f(4, 17), bound(4), strict).unwrap());
    }

    #[test]
    fn lenient_tail_accepts_one_more_in_last_place() {
        // 1/7 = [7] = [6, 1]
        assert!(!is_member(&f(1, 7), bound(6), TailConvention::Strict).unwrap());
        assert!(is_member(&f(1, 7), bound(6), TailConvention::Lenient).unwrap());
        assert!(!is_member(&f(1, 7), bound(5), TailConvention::Lenient).unwrap());
        // 4/11 = [2,1,3]: the prefix must still satisfy the bound
        assert!(!is_member(&f(4, 11), bound(1), TailConvention::Lenient).unwrap());
    }

    #[test]
    fn rejects_outside_unit_interval() {
        assert!(is_member(&f(0, 1), bound(5), TailConvention::Strict).is_err());
        assert!(is_member(&f(1, 1), bound(5), TailConvention::Strict).is_err());
        assert!(is_member(&f(-1, 3), bound(5), TailConvention::Strict).is_err());
        assert!(QuotientBound::new(0).is_err());
    }

    #[test]
    fn machine_check_agrees_with_expansion() {
        for tail in [TailConvention::Strict, TailConvention::Lenient] {
            for a in 1..=6 {
                for q in 2..=150u64 {
                    for b in 1..q {
                        let fast = coprime_within_bound(b.into(), q.into(), a, tail);
                        let coprime = num_integer::gcd(b, q) == 1;
                        let slow = coprime
                            && is_member(&f(b as i64, q as i64), bound(a), tail).unwrap();
                        assert_eq!(fast, slow, "b={b} q={q} A={a} {tail:?}");
                    }
                }
            }
        }
    }
}
