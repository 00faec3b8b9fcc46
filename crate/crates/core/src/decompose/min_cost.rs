use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::representation::{Representation, Sign, SignedTerm};
use crate::cf::{cost, Fraction};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 3;
const MAX_DEN_BOUND: u64 = 200;
/// Cheapest possible term: 1/2 = [2].
const MIN_TERM_COST: u64 = 2;

/// Cheapest representation found within the bounded family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCost {
    pub cost: u64,
    pub witness: Representation,
}

#[derive(Clone, Copy)]
struct Member {
    num: i64,
    den: i64,
    cost: u64,
}

/// Minimum total cost over all signed representations of `x` with at most
/// `max_terms` terms, each a reduced fraction in `(0, 1)` with denominator
/// `<= den_bound`. `None` when the family cannot represent `x`.
///
/// This bounds the unrestricted minimum from above; it does not compute it.
pub fn min_cost_oracle(x: &Fraction, max_terms: usize, den_bound: u64) -> Result<Option<MinCost>> {
    if !(1..=MAX_TERMS).contains(&max_terms) {
        return Err(Error::Config(format!("max_terms must be in 1..={MAX_TERMS}, got {max_terms}")));
    }
    if !(2..=MAX_DEN_BOUND).contains(&den_bound) {
        return Err(Error::Config(format!(
            "den_bound must be in 2..={MAX_DEN_BOUND}, got {den_bound}"
        )));
    }
    if !x.is_proper_positive() {
        return Err(Error::OutOfRange {
            value: x.to_string(),
            range: "(0, 1)",
        });
    }
    // a sum of k family members has denominator at most den_bound^k
    let (Some(tn), Some(td)) = (x.numer().to_i64(), x.denom().to_i64()) else {
        return Ok(None);
    };
    if td > (den_bound as i64).pow(max_terms as u32) {
        return Ok(None);
    }

    let mut family: Vec<Member> = Vec::new();
    for den in 2..=den_bound as i64 {
        for num in 1..den {
            if num.gcd(&den) == 1 {
                let c = cost(&Fraction::new(num, den)?).to_u64().expect("small cost");
                family.push(Member { num, den, cost: c });
            }
        }
    }
    family.sort_by_key(|m| (m.cost, m.den, m.num));
    let index: HashMap<(i64, i64), usize> =
        family.iter().enumerate().map(|(i, m)| ((m.num, m.den), i)).collect();

    // a signed family member equal to n/d, if any
    let lookup = |n: i64, d: i64| -> Option<(Sign, usize)> {
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        let sign = if n < 0 { Sign::Minus } else { Sign::Plus };
        index.get(&(n.abs(), d)).map(|&i| (sign, i))
    };
    let sub = |(n, d): (i64, i64), s: Sign, m: &Member| -> (i64, i64) {
        let (mn, md) = (i64::from(s.as_i8()) * m.num, m.den);
        let l = d.lcm(&md);
        (n * (l / d) - mn * (l / md), l)
    };

    let mut best: Option<(u64, Vec<(Sign, usize)>)> = lookup(tn, td)
        .filter(|&(s, _)| s == Sign::Plus)
        .map(|t| (family[t.1].cost, vec![t]));
    let beats = |best: &Option<(u64, Vec<(Sign, usize)>)>, c: u64| best.as_ref().is_none_or(|b| c < b.0);

    if max_terms >= 2 {
        for (i, m) in family.iter().enumerate() {
            if !beats(&best, m.cost + MIN_TERM_COST) {
                break;
            }
            for s in [Sign::Plus, Sign::Minus] {
                let rest = sub((tn, td), s, m);
                if rest.0 == 0 {
                    continue;
                }
                if let Some(t) = lookup(rest.0, rest.1) {
                    let c = m.cost + family[t.1].cost;
                    if beats(&best, c) {
                        best = Some((c, vec![(s, i), t]));
                    }
                }
            }
        }
    }

    if max_terms >= 3 {
        for (i, m1) in family.iter().enumerate() {
            if !beats(&best, 2 * m1.cost + MIN_TERM_COST) {
                break;
            }
            for (j, m2) in family.iter().enumerate().skip(i) {
                if !beats(&best, m1.cost + m2.cost + MIN_TERM_COST) {
                    break;
                }
                for s1 in [Sign::Plus, Sign::Minus] {
                    let r1 = sub((tn, td), s1, m1);
                    for s2 in [Sign::Plus, Sign::Minus] {
                        let r2 = sub(r1, s2, m2);
                        if r2.0 == 0 {
                            continue;
                        }
                        if let Some(t) = lookup(r2.0, r2.1) {
                            let c = m1.cost + m2.cost + family[t.1].cost;
                            if beats(&best, c) {
                                best = Some((c, vec![(s1, i), (s2, j), t]));
                            }
                        }
                    }
                }
            }
        }
    }

    best.map(|(c, picks)| {
        let terms = picks
            .into_iter()
            .map(|(s, i)| SignedTerm::new(s, Fraction::new(family[i].num, family[i].den)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(MinCost {
            cost: c,
            witness: Representation::new(x.clone(), terms),
        })
    })
    .transpose()
}
