use std::collections::VecDeque;

use serde::Serialize;

use super::b_tree_size;
use crate::error::{Error, Result};
use crate::ff_core::FieldContext;
use crate::orbits::{GeneratorSet, ReducedSystem, Word};

/// Largest vertex count for the dense edge table.
pub const GRAPH_SIZE_LIMIT: u64 = 1 << 20;
/// Largest `k^(h l)` accepted by the witness search.
pub const WITNESS_SEARCH_LIMIT: u128 = 1 << 22;

/// Vertices `0..q` with `k` labelled out-edges each. For graphs built from a
/// field, vertex `i` is the element with packed index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalGraph {
    q: usize,
    k: usize,
    /// `table[v * k + (label - 1)]`.
    table: Vec<u32>,
}

/// A subset of the vertices, stored as a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet(Vec<bool>);

impl VertexSet {
    pub fn new(q: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; q];
        for v in members {
            mask[v] = true;
        }
        VertexSet(mask)
    }

    pub fn full(q: usize) -> Self {
        VertexSet(vec![true; q])
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FunctionalGraph {
    /// Edge table of the reduced system over all of its field.
    pub fn build(gens: &GeneratorSet, ctx: &FieldContext) -> Result<Self> {
        if ctx.size() > GRAPH_SIZE_LIMIT {
            return Err(Error::TooLarge(format!(
                "functional graph on {} vertices exceeds {GRAPH_SIZE_LIMIT}",
                ctx.size()
            )));
        }
        Ok(Self::from_reduced(&gens.reduce(ctx)?))
    }

    pub fn from_reduced(sys: &ReducedSystem) -> Self {
        let ctx = sys.ctx();
        assert!(ctx.size() <= GRAPH_SIZE_LIMIT, "field too large for a dense graph");
        let table = ctx
            .elements()
            .flat_map(|x| sys.images(x).map(|y| y.index() as u32).collect::<Vec<_>>())
            .collect();
        FunctionalGraph { q: ctx.size() as usize, k: sys.k(), table }
    }

    /// Graph from explicit successor lists, `succ[v][i]` being the endpoint of label `i + 1`.
    pub fn from_successors(succ: &[Vec<usize>]) -> Result<Self> {
        let q = succ.len();
        let k = succ.first().map_or(0, Vec::len);
        if k == 0 || succ.iter().any(|s| s.len() != k || s.iter().any(|&y| y >= q)) {
            return Err(Error::OutOfRange(
                "every vertex needs the same positive number of in-range successors".into(),
            ));
        }
        Ok(FunctionalGraph {
            q,
            k,
            table: succ.iter().flatten().map(|&y| y as u32).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Endpoint of the edge labelled `letter` (1-based) out of `v`.
    pub fn step(&self, v: usize, letter: u32) -> usize {
        self.table[v * self.k + letter as usize - 1] as usize
    }

    pub fn walk(&self, v: usize, w: &Word) -> usize {
        w.letters().iter().fold(v, |x, &a| self.step(x, a))
    }

    /// BFS distances from `u`.
    pub fn distances_from(&self, u: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.q];
        dist[u] = Some(0);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].expect("queued vertices have distances");
            for a in 1..=self.k as u32 {
                let y = self.step(x, a);
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Shortest directed path length, `None` if unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Option<u32> {
        self.distances_from(u)[v]
    }
}

fn check_words(g: &FunctionalGraph, words: &[Word]) -> Result<()> {
    if words.is_empty() || words.iter().any(Word::is_empty) {
        return Err(Error::OutOfRange("need at least one word, each of length >= 1".into()));
    }
    words.iter().try_for_each(|w| w.validate(g.k()))
}

/// `L_N(u, A; w_1..w_l)`: vertices `v` with `d(u, v) <= N` such that every
/// `w_i(v)` also lies in `A` within distance `N` of `u`.
pub fn l_n_count(g: &FunctionalGraph, u: usize, a: &VertexSet, n: u32, words: &[Word]) -> Result<usize> {
    check_words(g, words)?;
    let dist = g.distances_from(u);
    let near = |v: usize| dist[v].is_some_and(|d| d <= n);
    Ok((0..g.vertex_count())
        .filter(|&v| near(v))
        .filter(|&v| {
            words.iter().all(|w| {
                let end = g.walk(v, w);
                near(end) && a.contains(end)
            })
        })
        .count())
}

/// Result of the exhaustive witness-word search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub words: Vec<Word>,
    pub count: usize,
    /// `#{v : d(u, v) <= N}`.
    pub ball: usize,
    /// `#{v in A : d(u, v) <= N}`.
    pub ball_in_a: usize,
    pub b: u128,
    /// `A`-ball at least `max{3B(k,h), (3l/h) ball}`.
    pub hypothesis_met: bool,
    /// `(h / B^(l+1)) * ball`.
    pub reference: f64,
    /// `count / reference`.
    pub ratio: f64,
}

/// Every word of length `1..=h`, ordered by length then lexicographically.
fn words_up_to(k: usize, h: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Vec::<u32>::new()];
    for _ in 0..h {
        layer = layer
            .into_iter()
            .flat_map(|w| {
                (1..=k as u32).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(Word::new));
    }
    out
}

/// Next `l`-combination of `0..m` in lexicographic order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let l = c.len();
    let Some(i) = (0..l).rev().find(|&i| c[i] < m - l + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..l {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// Searches all `l`-sets of distinct words of length at most `h` for the largest
/// `L_N`; the first maximum in length-lex order wins. With the hypothesis met and
/// `c > 0`, the count must reach `c * reference`.
pub fn find_witness_words(
    g: &FunctionalGraph,
    u: usize,
    a: &VertexSet,
    n: u32,
    h: u32,
    l: usize,
    c: f64,
) -> Result<WitnessReport> {
    if h == 0 || l == 0 {
        return Err(Error::OutOfRange("witness search needs h >= 1 and l >= 1".into()));
    }
    let size = (g.k() as u128).checked_pow(h * l as u32);
    if size.is_none_or(|s| s > WITNESS_SEARCH_LIMIT) {
        return Err(Error::ExplosionGuard(format!(
            "k^(h l) = {}^({h}*{l}) exceeds {WITNESS_SEARCH_LIMIT}",
            g.k()
        )));
    }
    let candidates = words_up_to(g.k(), h);
    if candidates.len() < l {
        return Err(Error::OutOfRange(format!(
            "only {} words of length <= {h}, fewer than l = {l}",
            candidates.len()
        )));
    }
    let dist = g.distances_from(u);
    let near = |v: usize| dist[v].is_some_and(|d| d <= n);
    let ball: Vec<usize> = (0..g.vertex_count()).filter(|&v| near(v)).collect();
    let ball_in_a = ball.iter().filter(|&&v| a.contains(v)).count();

    // Per word, the ball members it sends into A near u, as a bitset over `ball`.
    let blocks = ball.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = candidates
        .iter()
        .map(|w| {
            let mut m = vec![0u64; blocks];
            for (i, &v) in ball.iter().enumerate() {
                let end = g.walk(v, w);
                if near(end) && a.contains(end) {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect();

    let mut combo: Vec<usize> = (0..l).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let count: usize = (0..blocks)
            .map(|b| combo.iter().fold(u64::MAX, |acc, &i| acc & masks[i][b]).count_ones() as usize)
            .sum();
        if best.as_ref().is_none_or(|(bc, _)| count > *bc) {
            best = Some((count, combo.clone()));
        }
        if !next_combination(&mut combo, candidates.len()) {
            break;
        }
    }
    let (count, chosen) = best.expect("at least one combination");
    let words: Vec<Word> = chosen.iter().map(|&i| candidates[i].clone()).collect();

    let b = b_tree_size(g.k() as u64, h)?;
    let hypothesis_met = ball_in_a as u128 >= 3 * b && (ball_in_a as u128) * (h as u128) >= 3 * (l as u128) * ball.len() as u128;
    let reference = h as f64 / (b as f64).powi(l as i32 + 1) * ball.len() as f64;
    let ratio = if reference > 0.0 { count as f64 / reference } else { f64::NAN };
    if hypothesis_met && c > 0.0 && (count as f64) < c * reference {
        return Err(Error::GuaranteeViolated(format!(
            "L_N = {count} below c * h / B^(l+1) * ball = {}",
            c * reference
        )));
    }
    Ok(WitnessReport {
        words,
        count,
        ball: ball.len(),
        ball_in_a,
        b,
        hypothesis_met,
        reference,
        ratio,
    })
}
