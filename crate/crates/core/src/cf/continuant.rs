use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::CfExpansion;
use crate::error::{Error, Result};

/// A 2x2 non-negative integer matrix built from generators `(0 1; 1 a)`.
///
/// For the word `[a1, ..., an]` the right column is `(b, q)` with
/// `b/q = [a1, ..., an]`, and the left column holds the previous convergent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuantMatrix {
    entries: [[BigUint; 2]; 2],
}

impl ContinuantMatrix {
    pub fn identity() -> Self {
        ContinuantMatrix {
            entries: [[BigUint::one(), BigUint::zero()], [BigUint::zero(), BigUint::one()]],
        }
    }

    pub fn generator(a: impl Into<BigUint>) -> Self {
        ContinuantMatrix {
            entries: [[BigUint::zero(), BigUint::one()], [BigUint::one(), a.into()]],
        }
    }

    pub fn from_entries(entries: [[BigUint; 2]; 2]) -> Self {
        ContinuantMatrix { entries }
    }

    pub fn entries(&self) -> &[[BigUint; 2]; 2] {
        &self.entries
    }

    /// `(g12, g22)`: numerator and denominator of the represented fraction.
    pub fn right_column(&self) -> (&BigUint, &BigUint) {
        (&self.entries[0][1], &self.entries[1][1])
    }

    pub fn determinant(&self) -> BigInt {
        let [[a, b], [c, d]] = &self.entries;
        BigInt::from(a * d) - BigInt::from(b * c)
    }

    /// Max-entry norm.
    pub fn norm(&self) -> &BigUint {
        self.entries.iter().flatten().max().expect("four entries")
    }

    /// Right multiplication by the generator `(0 1; 1 a)`.
    pub fn push_quotient(&self, a: &BigUint) -> Self {
        let [[x, y], [z, w]] = &self.entries;
        ContinuantMatrix {
            entries: [[y.clone(), x + a * y], [w.clone(), z + a * w]],
        }
    }
}

impl fmt::Display for ContinuantMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Ordered product of the generators of a non-empty expansion.
pub fn continuant_product(e: &CfExpansion) -> Result<ContinuantMatrix> {
    if e.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    Ok(e
        .quotients()
        .iter()
        .fold(ContinuantMatrix::identity(), |m, a| m.push_quotient(a)))
}
