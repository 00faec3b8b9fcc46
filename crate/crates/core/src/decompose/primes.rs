use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DecomposeConfig;
use crate::error::{Error, Result};

/// Longest window the segmented sieve accepts.
const MAX_WINDOW: u64 = 1 << 26;

/// Primes chosen for one split attempt, with the window they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSelection {
    /// Ascending, pairwise distinct, coprime to `q`.
    pub primes: Vec<u64>,
    /// `(lo, hi)` before widening.
    pub base_window: (u64, u64),
    /// `(lo, hi)` actually used.
    pub window: (u64, u64),
    pub widening_rounds: u32,
    pub r_requested: usize,
    pub attempt: u32,
    pub seed: u64,
}

/// `(max(3, ⌈q^δ/2⌉), max(5, ⌊q^δ⌋))`, computed exactly.
pub fn prime_window(q: &BigUint, cfg: &DecomposeConfig) -> Result<(u64, u64)> {
    let to_u32 = |v: &num_bigint::BigInt| {
        v.to_u32()
            .ok_or_else(|| Error::Config(format!("delta {} has oversized terms", cfg.delta)))
    };
    let (n, m) = (to_u32(cfg.delta.numer())?, to_u32(cfg.delta.denom())?);
    let power = q.pow(n);
    // ⌊q^(n/m)⌋
    let floor_root = power.nth_root(m);
    // smallest t with (2t)^m >= q^n
    let mut half_ceil = &floor_root / 2u32;
    while (&half_ceil * 2u32).pow(m) < power {
        half_ceil += 1u32;
    }
    let too_big = || Error::Overflow(format!("prime window for q = {q}"));
    let hi = floor_root.to_u64().ok_or_else(too_big)?.max(5);
    let lo = half_ceil.to_u64().ok_or_else(too_big)?.max(3);
    Ok((lo, hi))
}

/// Primes in `[lo, hi]` by a segmented sieve.
pub fn primes_between(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    if hi - lo > MAX_WINDOW {
        return Err(Error::Overflow(format!("prime window [{lo}, {hi}]")));
    }
    let lo = lo.max(2);
    if hi < lo {
        return Ok(Vec::new());
    }
    let root = hi.sqrt();
    let mut small = vec![true; (root + 1) as usize];
    let mut composite = vec![false; (hi - lo + 1) as usize];
    for p in 2..=root {
        if !small[p as usize] {
            continue;
        }
        let mut k = p * p;
        while k <= root {
            small[k as usize] = false;
            k += p;
        }
        let mut m = (lo.div_ceil(p) * p).max(p * p);
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    Ok(composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect())
}

fn widened(base: (u64, u64), rounds: u32) -> Result<(u64, u64)> {
    let scale = 1u64
        .checked_shl(rounds)
        .ok_or_else(|| Error::Config(format!("{rounds} widening rounds")))?;
    let lo = base.0.div_ceil(scale).max(3);
    let hi = base
        .1
        .checked_mul(scale)
        .ok_or_else(|| Error::Overflow(format!("widened prime window {base:?}")))?;
    Ok((lo, hi))
}

/// Chooses `cfg.r` distinct primes near `q^δ`, all coprime to `q` and never 2.
///
/// An underpopulated window is widened up to `cfg.widening_rounds` times, then
/// the prime count is reduced one at a time down to 1. Attempt 0 takes primes
/// just below the upper end of the base window, descending, followed by primes
/// above it, ascending. Later attempts start from `min(attempt, rounds)`
/// widenings and draw a seeded sample.
pub fn select_primes(q: &BigUint, cfg: &DecomposeConfig, attempt: u32) -> Result<PrimeSelection> {
    let base = prime_window(q, cfg)?;
    let mut rounds = attempt.min(cfg.widening_rounds);
    let mut want = cfg.r;
    let (window, admissible) = loop {
        let window = widened(base, rounds)?;
        let admissible: Vec<u64> = primes_between(window.0, window.1)?
            .into_iter()
            .filter(|&p| !(q % p).is_zero())
            .collect();
        if admissible.len() >= want {
            break (window, admissible);
        }
        if rounds < cfg.widening_rounds {
            rounds += 1;
        } else if want > 1 {
            want -= 1;
        } else {
            return Err(Error::WindowExhausted { q: q.to_string() });
        }
    };
    let mut primes: Vec<u64> = if attempt == 0 {
        let (below, above): (Vec<u64>, Vec<u64>) = admissible.iter().partition(|&&p| p <= base.1);
        below.into_iter().rev().chain(above).take(want).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(u64::from(attempt));
        index::sample(&mut rng, admissible.len(), want)
            .into_iter()
            .map(|i| admissible[i])
            .collect()
    };
    primes.sort_unstable();
    Ok(PrimeSelection {
        primes,
        base_window: base,
        window,
        widening_rounds: rounds,
        r_requested: cfg.r,
        attempt,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::Fraction;
    use proptest::prelude::*;

    fn cfg(delta: (i64, i64), r: usize) -> DecomposeConfig {
        DecomposeConfig {
            delta: Fraction::new(delta.0, delta.1).unwrap(),
            r,
            ..DecomposeConfig::default()
        }
    }

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_matches_trial_division() {
        for (lo, hi) in [(0, 100), (3, 3), (90, 130), (1000, 1100), (20, 10)] {
            let expected: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
            assert_eq!(primes_between(lo, hi).unwrap(), expected);
        }
    }

    #[test]
    fn window_is_exact() {
        // sqrt(101) = 10.04..: [max(3, 6), max(5, 10)]
        assert_eq!(prime_window(&BigUint::from(101u32), &cfg((1, 2), 2)).unwrap(), (6, 10));
        // 10^4^(1/4) = 10 exactly
        assert_eq!(prime_window(&BigUint::from(10_000u32), &cfg((1, 4), 4)).unwrap(), (5, 10));
        // tiny q: both floors apply
        assert_eq!(prime_window(&BigUint::from(7u32), &cfg((1, 4), 4)).unwrap(), (3, 5));
    }

    #[test]
    fn q_101_half_two_primes() {
        let sel = select_primes(&BigUint::from(101u32), &cfg((1, 2), 2), 0).unwrap();
        assert_eq!(sel.primes, vec![5, 7]);
        assert_eq!(sel.widening_rounds, 1);
        assert_eq!(sel.window, (3, 20));
    }

    #[test]
    fn two_is_never_chosen() {
        for q in [2u32, 4, 6, 30, 210, 1024] {
            for attempt in 0..4 {
                let sel = select_primes(&BigUint::from(q), &cfg((1, 4), 4), attempt).unwrap();
                assert!(!sel.primes.contains(&2));
            }
        }
    }

    #[test]
    fn r_shrinks_when_window_stays_thin() {
        // q^(1/20) is about 4.3, so the window [3, 5] widens to at most [3, 40]
        let q = BigUint::from(3u64 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31);
        let sel = select_primes(&q, &cfg((1, 20), 4), 0).unwrap();
        assert_eq!(sel.primes, vec![37]);
    }

    #[test]
    fn resampling_is_seeded() {
        let q = BigUint::from(9973u32);
        let c = cfg((1, 4), 4);
        let a = select_primes(&q, &c, 2).unwrap();
        assert_eq!(a, select_primes(&q, &c, 2).unwrap());
        let other = DecomposeConfig { seed: 99, ..c.clone() };
        let pools: Vec<_> = (1..6).map(|k| select_primes(&q, &other, k).unwrap().primes).collect();
        assert!(pools.iter().any(|p| *p != a.primes));
    }

    proptest! {
        #[test]
        fn selections_are_distinct_coprime_primes(q in 2u64..2_000_000, attempt in 0u32..5) {
            let big = BigUint::from(q);
            let sel = select_primes(&big, &DecomposeConfig::default(), attempt).unwrap();
            prop_assert!(!sel.primes.is_empty());
            prop_assert!(sel.primes.windows(2).all(|w| w[0] < w[1]));
            for &p in &sel.primes {
                prop_assert!(is_prime(p) && p >= 3);
                prop_assert!(q % p != 0);
                prop_assert!(sel.window.0 <= p && p <= sel.window.1);
            }
        }
    }
}
