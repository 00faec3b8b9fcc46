use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;

use super::QuotientBound;
use crate::cf::ContinuantMatrix;

/// One node of the continuant tree: the word `[a1..ak]` with its last two
/// convergents `p_{k-1}/q_{k-1}` and `p_k/q_k`.
#[derive(Debug)]
pub(crate) struct Node<'a> {
    pub word: &'a [u64],
    pub p_prev: u128,
    pub q_prev: u128,
    pub p: u128,
    pub q: u128,
}

impl Node<'_> {
    pub fn last(&self) -> u64 {
        *self.word.last().expect("nodes are non-empty words")
    }
}

/// Depth-first walk over all words with quotients in `1..=bound` whose
/// denominator `q_k` stays `<= limit`. Returns the number of nodes visited.
pub(crate) fn walk_continuants<F>(limit: u128, bound: QuotientBound, mut visit: F) -> u64
where
    F: FnMut(&Node<'_>) -> ControlFlow<()>,
{
    let mut word = Vec::new();
    let mut visited = 0;
    let _ = descend(limit, bound.get(), &mut word, (1, 0), (0, 1), &mut visited, &mut visit);
    visited
}

fn descend<F>(
    limit: u128,
    bound: u64,
    word: &mut Vec<u64>,
    (p_prev, q_prev): (u128, u128),
    (p, q): (u128, u128),
    visited: &mut u64,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Node<'_>) -> ControlFlow<()>,
{
    for a in 1..=bound {
        let wide = u128::from(a);
        let q_next = match wide.checked_mul(q).and_then(|t| t.checked_add(q_prev)) {
            Some(v) if v <= limit => v,
            // q_next grows with a, so larger quotients are pruned too
            _ => break,
        };
        let p_next = wide * p + p_prev;
        word.push(a);
        *visited += 1;
        let node = Node {
            word,
            p_prev: p,
            q_prev: q,
            p: p_next,
            q: q_next,
        };
        let flow = match visit(&node) {
            ControlFlow::Continue(()) => descend(limit, bound, word, (p, q), (p_next, q_next), visited, visit),
            stop => stop,
        };
        word.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// All strict `R_A` numerators for each denominator `q <= n`.
///
/// Denominators without any admissible numerator are absent from the map.
pub fn enumerate_by_denominator(n: u64, bound: QuotientBound) -> BTreeMap<u64, Vec<u64>> {
    let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    walk_continuants(u128::from(n), bound, |node| {
        if node.last() >= 2 {
            // q <= n fits in u64
            out.entry(node.q as u64).or_default().push(node.p as u64);
        }
        ControlFlow::Continue(())
    });
    for nums in out.values_mut() {
        nums.sort_unstable();
    }
    out
}

/// A product of generators together with the word that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallElement {
    pub word: Vec<u64>,
    pub matrix: ContinuantMatrix,
}

/// All generator products with max-entry norm `<= m`, in lexicographic word order.
pub fn enumerate_semigroup_ball(m: u64, bound: QuotientBound) -> Vec<BallElement> {
    let mut out = Vec::new();
    // the largest entry of a product is its bottom-right continuant q_k
    walk_continuants(u128::from(m), bound, |node| {
        let matrix = ContinuantMatrix::from_entries([
            [BigUint::from(node.p_prev), BigUint::from(node.p)],
            [BigUint::from(node.q_prev), BigUint::from(node.q)],
        ]);
        out.push(BallElement {
            word: node.word.to_vec(),
            matrix,
        });
        ControlFlow::Continue(())
    });
    out
}
