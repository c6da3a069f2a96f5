use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::{all_words, exhaustive_guard, level_images, orbit, ReducedSystem, Word, WordStream};
use crate::error::{Error, Result};
use crate::ff_core::{FieldContext, FieldElement};

/// `M_{x,Psi}(t, N)` together with the iterates that hit zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MCount {
    pub count: usize,
    pub zero_hits: usize,
}

fn small_order(ctx: &FieldContext, v: FieldElement, t: u64) -> Result<bool> {
    if v.is_zero() {
        return Ok(false);
    }
    Ok(ctx.mul_order(v)? <= t)
}

/// Counts `n` in `0..N` whose iterate is nonzero with order at most `t`.
pub fn m_count(sys: &ReducedSystem, stream: &WordStream, x: FieldElement, t: u64, n: usize) -> Result<MCount> {
    let mut out = MCount { count: 0, zero_hits: 0 };
    for v in sys.trajectory(stream, x, n)? {
        if v.is_zero() {
            out.zero_hits += 1;
        } else if sys.ctx().mul_order(v)? <= t {
            out.count += 1;
        }
    }
    Ok(out)
}

/// Best `M` over all sequences and the lexicographically smallest length-`N` word attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupM {
    pub value: usize,
    pub witness: Word,
}

/// Maximum of `M_{x,Psi}(t, N)` over all sequences, by dynamic programming over
/// the reachable values at each step. Only the first `N - 1` letters matter, so the
/// witness ends in letter 1.
pub fn sup_m_over_sequences(sys: &ReducedSystem, x: FieldElement, t: u64, n: usize) -> Result<SupM> {
    if n == 0 {
        return Ok(SupM { value: 0, witness: Word::empty() });
    }
    let ctx = sys.ctx();
    let levels = level_images(sys, x, n - 1);
    let mut order_ok: HashMap<FieldElement, bool> = HashMap::new();
    let mut good = |v: FieldElement| -> Result<usize> {
        if let Some(&b) = order_ok.get(&v) {
            return Ok(b as usize);
        }
        let b = small_order(ctx, v, t)?;
        order_ok.insert(v, b);
        Ok(b as usize)
    };
    // best[j][v]: the most qualifying steps among j..N-1 when step j sits at v.
    let mut best: Vec<HashMap<FieldElement, usize>> = vec![HashMap::new(); n];
    for &v in &levels[n - 1] {
        let g = good(v)?;
        best[n - 1].insert(v, g);
    }
    for j in (0..n - 1).rev() {
        let (head, tail) = best.split_at_mut(j + 1);
        for &v in &levels[j] {
            let ahead = sys.images(v).map(|y| tail[0][&y]).max().expect("k >= 1");
            head[j].insert(v, good(v)? + ahead);
        }
    }
    let mut letters = Vec::with_capacity(n);
    let mut cur = x;
    for j in 0..n - 1 {
        let ahead = &best[j + 1];
        let target = sys.images(cur).map(|y| ahead[&y]).max().expect("k >= 1");
        let letter = (1..=sys.k() as u32)
            .find(|&a| ahead[&sys.image(a, cur)] == target)
            .expect("a maximizing letter exists");
        letters.push(letter);
        cur = sys.image(letter, cur);
    }
    letters.push(1);
    Ok(SupM { value: best[0][&x], witness: Word::new(letters) })
}

/// The same maximum by trying every word of length `N` (guarded by `k^N`).
pub fn sup_m_exhaustive(sys: &ReducedSystem, x: FieldElement, t: u64, n: usize) -> Result<SupM> {
    exhaustive_guard(sys.k(), n)?;
    let mut best: Option<SupM> = None;
    for w in all_words(sys.k(), n) {
        let stream = WordStream::Periodic {
            preperiod: w.letters().to_vec(),
            period: vec![1],
        };
        let m = m_count(sys, &stream, x, t, n)?.count;
        if best.as_ref().is_none_or(|b| m > b.value) {
            best = Some(SupM { value: m, witness: w });
        }
    }
    Ok(best.expect("at least one word"))
}

/// Distinct nonzero points of order at most `t` in the union of the levels
/// `1..=N` (or `0..=N` with `include_level0`).
pub fn count_small_order_points(
    sys: &ReducedSystem,
    u: FieldElement,
    t: u64,
    n: usize,
    include_level0: bool,
) -> Result<usize> {
    let levels = level_images(sys, u, n);
    let skip = usize::from(!include_level0);
    let union: HashSet<FieldElement> = levels.into_iter().skip(skip).flatten().collect();
    let mut count = 0;
    for v in union {
        if small_order(sys.ctx(), v, t)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Walks from the start point whose visited sets cover the semigroup orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceCover {
    pub count: usize,
    pub walks: Vec<WordStream>,
}

/// Greedy upper bound for the number of single sequences needed to cover the
/// orbit of `x`: each walk keeps moving to the nearest uncovered point.
pub fn greedy_sequence_cover(sys: &ReducedSystem, x: FieldElement, cap: usize) -> Result<SequenceCover> {
    let record = orbit(sys, x, cap, true);
    if record.truncated {
        return Err(Error::Truncated(cap));
    }
    let mut uncovered: HashSet<FieldElement> = record.elements.iter().map(|&(e, _)| e).collect();
    let mut walks = Vec::new();
    while !uncovered.is_empty() {
        let mut cur = x;
        uncovered.remove(&cur);
        let mut letters = Vec::new();
        while let Some(path) = nearest_uncovered(sys, cur, &uncovered) {
            for (letter, v) in path {
                letters.push(letter);
                uncovered.remove(&v);
                cur = v;
            }
        }
        // The walk then repeats letter 1 forever; those points are already covered.
        walks.push(WordStream::Periodic { preperiod: letters, period: vec![1] });
    }
    if walks.is_empty() {
        walks.push(WordStream::Periodic { preperiod: Vec::new(), period: vec![1] });
    }
    Ok(SequenceCover { count: walks.len(), walks })
}

/// Shortest labelled path from `from` to the first uncovered point found by BFS.
fn nearest_uncovered(
    sys: &ReducedSystem,
    from: FieldElement,
    uncovered: &HashSet<FieldElement>,
) -> Option<Vec<(u32, FieldElement)>> {
    let mut parent: HashMap<FieldElement, (FieldElement, u32)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(v) = queue.pop_front() {
        for a in 1..=sys.k() as u32 {
            let y = sys.image(a, v);
            if !seen.insert(y) {
                continue;
            }
            parent.insert(y, (v, a));
            if uncovered.contains(&y) {
                let mut path = vec![(a, y)];
                let mut cur = v;
                while cur != from {
                    let (prev, letter) = parent[&cur];
                    path.push((letter, cur));
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(y);
        }
    }
    None
}

/// `T log d + s log tau`, the logarithm of `d^T tau^s`.
pub fn theorem46_lhs(d: u64, big_t: u64, tau: u64, s: u64) -> Result<f64> {
    if d == 0 || big_t == 0 || tau == 0 || s == 0 {
        return Err(Error::OutOfRange(format!(
            "d, T, tau and s must be at least 1 (got {d}, {big_t}, {tau}, {s})"
        )));
    }
    Ok(big_t as f64 * (d as f64).ln() + s as f64 * (tau as f64).ln())
}
