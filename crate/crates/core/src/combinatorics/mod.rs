//! Gap counting, pair counting along a sequence, complete-tree sizes and the
//! labelled functional graph of a generator system.

mod graph;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_core::FieldElement;
use crate::orbits::{ReducedSystem, WordStream};

pub use graph::{find_witness_words, l_n_count, FunctionalGraph, VertexSet, WitnessReport, GRAPH_SIZE_LIMIT, WITNESS_SEARCH_LIMIT};

/// `B(k, h)`: nodes of the complete `k`-ary tree of depth `h - 1`.
pub fn b_tree_size(k: u64, h: u32) -> Result<u128> {
    if k == 0 || h == 0 {
        return Err(Error::OutOfRange(format!("B(k, h) needs k >= 1 and h >= 1 (got k={k}, h={h})")));
    }
    if k == 1 {
        return Ok(h as u128);
    }
    let overflow = || Error::OutOfRange(format!("B({k}, {h}) does not fit in 128 bits"));
    let kh = (k as u128).checked_pow(h).ok_or_else(overflow)?;
    Ok((kh - 1) / (k as u128 - 1))
}

/// A frequent gap in an increasing index sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub r: u64,
    pub count: u64,
    pub t: u64,
    pub n: u64,
}

/// Most frequent consecutive gap among those `<= 2N/T`, smallest on ties.
/// `None` if no gap qualifies.
fn best_small_gap(indices: &[u64], n: u64) -> Option<(u64, u64)> {
    let t = indices.len() as u64;
    let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
    for w in indices.windows(2) {
        let r = w[1] - w[0];
        if r * t <= 2 * n {
            *tally.entry(r).or_default() += 1;
        }
    }
    // max_by_key keeps the last maximum; iterate descending so that is the smallest r.
    tally.into_iter().rev().max_by_key(|&(_, c)| c)
}

fn check_indices(indices: &[u64], n: u64) -> Result<()> {
    if indices.windows(2).any(|w| w[0] >= w[1]) || indices.last().is_some_and(|&x| x > n) {
        return Err(Error::OutOfRange(format!(
            "indices must be strictly increasing within 0..={n}"
        )));
    }
    Ok(())
}

/// Finds `r <= 2N/T` occurring as a consecutive gap at least `T(T-1)/(4N)` times.
/// Requires `2 <= T < N/2`; the bound is then guaranteed and checked.
pub fn find_common_gap(indices: &[u64], n: u64) -> Result<GapReport> {
    check_indices(indices, n)?;
    let t = indices.len() as u64;
    if t < 2 || 2 * t >= n {
        return Err(Error::HypothesisViolated(format!("need 2 <= T < N/2, got T={t}, N={n}")));
    }
    let (r, count) = best_small_gap(indices, n)
        .ok_or_else(|| Error::GuaranteeViolated(format!("no gap <= 2N/T for T={t}, N={n}")))?;
    if 4 * n * count < t * (t - 1) {
        return Err(Error::GuaranteeViolated(format!(
            "gap {r} occurs {count} times, below T(T-1)/(4N) for T={t}, N={n}"
        )));
    }
    Ok(GapReport { r, count, t, n })
}

/// Outcome of replaying the pair-counting argument along one sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairStepReport {
    /// The common step `t`.
    pub step: u64,
    /// Visit indices `n_1 < ... < n_T` in `0..=N`.
    pub visits: Vec<u64>,
    /// Indices `n_j` with `n_{j+1} - n_j = t`; each gives the pair at `(n_j, n_j + t)`.
    pub events: Vec<u64>,
    /// Distinct value pairs `(u, v)` realised by the events, sorted.
    pub pairs: Vec<(FieldElement, FieldElement)>,
    /// `tau = T / N`.
    pub tau: f64,
    /// `tau^2 N / 8`.
    pub bound: f64,
    /// Whether `T < N/2`, so that the bound is guaranteed and was checked.
    pub bound_applies: bool,
}

/// Collects the visits of `Psi^(n)(x)` to `S` for `n <= N`, picks the common gap `t`
/// and lists the step-`t` pairs. Needs at least two visits. When `T < N/2` the
/// number of step-`t` events is checked against `tau^2 N / 8`.
pub fn pair_step_count(
    sys: &ReducedSystem,
    stream: &WordStream,
    x: FieldElement,
    s: &[FieldElement],
    n: u64,
) -> Result<PairStepReport> {
    let traj = sys.trajectory(stream, x, n as usize + 1)?;
    let in_s = |v: &FieldElement| s.contains(v);
    let visits: Vec<u64> = (0..=n).filter(|&i| in_s(&traj[i as usize])).collect();
    let t = visits.len() as u64;
    if t < 2 {
        return Err(Error::HypothesisViolated(format!("only {t} visits to S up to N={n}; need 2")));
    }
    let bound_applies = 2 * t < n;
    let (step, _) = if bound_applies {
        let g = find_common_gap(&visits, n)?;
        (g.r, g.count)
    } else {
        best_small_gap(&visits, n).expect("T >= 2 forces a gap <= 2N/T")
    };
    let events: Vec<u64> = visits
        .windows(2)
        .filter(|w| w[1] - w[0] == step)
        .map(|w| w[0])
        .collect();
    let mut pairs: Vec<(FieldElement, FieldElement)> = events
        .iter()
        .map(|&i| (traj[i as usize], traj[(i + step) as usize]))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let tau = t as f64 / n as f64;
    let bound = tau * tau * n as f64 / 8.0;
    // Exact form of events >= T^2 / (8N).
    if bound_applies && (events.len() as u64) * 8 * n < t * t {
        return Err(Error::GuaranteeViolated(format!(
            "{} step-{step} events, below tau^2 N / 8 = {bound}",
            events.len()
        )));
    }
    Ok(PairStepReport { step, visits, events, pairs, tau, bound, bound_applies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::FieldContext;
    use crate::orbits::GeneratorSet;
    use proptest::prelude::*;

    #[test]
    fn tree_sizes() {
        assert_eq!(b_tree_size(1, 5).unwrap(), 5);
        assert_eq!(b_tree_size(2, 3).unwrap(), 7);
        assert_eq!(b_tree_size(3, 2).unwrap(), 4);
        assert!(b_tree_size(0, 2).is_err());
        assert!(b_tree_size(2, 200).is_err());
    }

    #[test]
    fn gap_examples() {
        assert!(matches!(find_common_gap(&[0, 2, 4, 6, 8], 8), Err(Error::HypothesisViolated(_))));
        assert_eq!(find_common_gap(&[0, 2, 4, 6, 8], 20).unwrap(), GapReport { r: 2, count: 4, t: 5, n: 20 });
        assert_eq!(find_common_gap(&[0, 1, 5], 12).unwrap().r, 1);
        assert!(matches!(find_common_gap(&[3], 12), Err(Error::HypothesisViolated(_))));
        assert!(find_common_gap(&[0, 5, 3], 12).is_err());
    }

    fn squaring_mod7() -> ReducedSystem {
        GeneratorSet::parse(&["X^2"]).unwrap().reduce(&FieldContext::prime(7).unwrap()).unwrap()
    }

    #[test]
    fn pair_example() {
        let sys = squaring_mod7();
        let ctx = sys.ctx().clone();
        let e = |i| ctx.element(i).unwrap();
        let stream = WordStream::constant(1).unwrap();
        let rep = pair_step_count(&sys, &stream, e(3), &[e(2), e(4)], 20).unwrap();
        assert_eq!(rep.step, 1);
        assert_eq!(rep.pairs, vec![(e(2), e(4)), (e(4), e(2))]);
        assert!(!rep.bound_applies);
        assert!(matches!(
            pair_step_count(&sys, &stream, e(3), &[e(5)], 20),
            Err(Error::HypothesisViolated(_))
        ));
        let all: Vec<_> = ctx.elements().collect();
        let rep = pair_step_count(&sys, &stream, e(3), &all, 20).unwrap();
        assert_eq!(rep.step, 1);
        assert_eq!(rep.events.len(), 20);
    }

    #[test]
    fn distinct_pairs_can_fall_below_event_bound() {
        // Squaring mod 11 cycles 3, 9, 4, 5: visits to {9} recur every 4 steps.
        let sys = GeneratorSet::parse(&["X^2"]).unwrap().reduce(&FieldContext::prime(11).unwrap()).unwrap();
        let ctx = sys.ctx().clone();
        let e = |i| ctx.element(i).unwrap();
        let stream = WordStream::constant(1).unwrap();
        let rep = pair_step_count(&sys, &stream, e(3), &[e(9)], 400).unwrap();
        assert_eq!(rep.step, 4);
        assert!(rep.bound_applies);
        assert!(rep.events.len() as f64 >= rep.bound);
        assert_eq!(rep.pairs.len(), 1);
        assert!((rep.pairs.len() as f64) < rep.bound);
    }

    proptest! {
        #[test]
        fn gap_guarantee(mut idx in proptest::collection::btree_set(0u64..400, 2..60), extra in 0u64..400) {
            let v: Vec<u64> = std::mem::take(&mut idx).into_iter().collect();
            let n = (*v.last().unwrap()).max(2 * v.len() as u64 + 1) + extra;
            let rep = find_common_gap(&v, n).unwrap();
            prop_assert!(rep.r * rep.t <= 2 * n);
            prop_assert!(4 * n * rep.count >= rep.t * (rep.t - 1));
        }
    }
}
