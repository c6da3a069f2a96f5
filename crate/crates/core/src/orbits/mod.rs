//! Generator systems, words, level sets and semigroup orbits over a finite field.

mod counting;
mod word;

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_core::{FieldContext, FieldElement, FieldPoly};
use crate::intpoly::{system_height, IntPolynomial};

pub use counting::{
    count_small_order_points, greedy_sequence_cover, m_count, sup_m_exhaustive, sup_m_over_sequences,
    theorem46_lhs, MCount, SequenceCover, SupM,
};
pub use word::{Word, WordStream};

/// Largest `k^N` accepted by the exhaustive word-enumeration modes.
pub const EXHAUSTIVE_WORD_LIMIT: u128 = 1 << 24;

/// `F = {phi_1, ..., phi_k}` over Z, every degree at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    polys: Vec<IntPolynomial>,
    height: f64,
}

impl GeneratorSet {
    pub fn new(polys: Vec<IntPolynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::EmptySystem);
        }
        for f in &polys {
            match f.degree() {
                None => return Err(Error::ZeroPolynomial),
                Some(d) if d < 2 => return Err(Error::DegreeTooSmall(d)),
                Some(_) => {}
            }
        }
        let height = system_height(&polys)?;
        Ok(Self { polys, height })
    }

    pub fn parse<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        Self::new(
            texts
                .iter()
                .map(|t| t.as_ref().parse())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|f| f.degree().expect("nonzero")).collect()
    }

    /// `d = max d_i`.
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().expect("nonempty")
    }

    /// `h(F)`.
    pub fn height(&self) -> f64 {
        self.height
    }

    /// Reduces every generator into `ctx`; each must keep degree at least 2.
    pub fn reduce(&self, ctx: &FieldContext) -> Result<ReducedSystem> {
        let maps = self
            .polys
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let g = f.reduce_mod(ctx);
                match g.degree() {
                    Some(d) if d >= 2 => Ok(g),
                    d => Err(Error::DegenerateGenerator {
                        index: i + 1,
                        degree: d.map_or(-1, |d| d as i64),
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedSystem {
            ctx: ctx.clone(),
            maps,
        })
    }

    /// Composition `phi_{w_n} o ... o phi_{w_1}` over Z.
    pub fn compose_word(&self, w: &Word) -> Result<IntPolynomial> {
        w.validate(self.k())?;
        Ok(w
            .letters()
            .iter()
            .fold(IntPolynomial::x(), |acc, &a| self.polys[a as usize - 1].compose(&acc)))
    }
}

/// A generator system reduced into a concrete field.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    ctx: FieldContext,
    maps: Vec<FieldPoly>,
}

impl ReducedSystem {
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[FieldPoly] {
        &self.maps
    }

    /// `phi_letter(x)` for a 1-based letter already known to be valid.
    pub fn image(&self, letter: u32, x: FieldElement) -> FieldElement {
        self.maps[letter as usize - 1].eval(&self.ctx, x)
    }

    /// All `k` images of `x`, in letter order.
    pub fn images(&self, x: FieldElement) -> impl Iterator<Item = FieldElement> + '_ {
        self.maps.iter().map(move |f| f.eval(&self.ctx, x))
    }

    /// Applies the letters left to right: the first letter acts first.
    pub fn apply_word(&self, w: &Word, x: FieldElement) -> Result<FieldElement> {
        w.validate(self.k())?;
        Ok(w.letters().iter().fold(x, |acc, &a| self.image(a, acc)))
    }

    /// The iterates `Psi^(n)(x)` for `n = 0..len`.
    pub fn trajectory(&self, stream: &WordStream, x: FieldElement, len: usize) -> Result<Vec<FieldElement>> {
        let letters = stream.prefix(len.saturating_sub(1));
        letters.validate(self.k())?;
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return Ok(out);
        }
        let mut cur = x;
        out.push(cur);
        for &a in letters.letters() {
            cur = self.image(a, cur);
            out.push(cur);
        }
        Ok(out)
    }
}

/// A semigroup orbit with first-discovery levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub start: FieldElement,
    /// Elements in discovery order with their minimal level.
    pub elements: Vec<(FieldElement, u32)>,
    pub truncated: bool,
}

impl OrbitRecord {
    /// `T`, the number of elements found.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.elements.iter().any(|&(e, _)| e == x)
    }
}

/// Breadth-first orbit of `x`. With `include_start` the start sits at level 0;
/// otherwise only points reached after at least one step are listed.
pub fn orbit(sys: &ReducedSystem, x: FieldElement, cap: usize, include_start: bool) -> OrbitRecord {
    let mut level_of: HashMap<FieldElement, u32> = HashMap::new();
    let mut elements = Vec::new();
    let mut truncated = false;
    let mut frontier = vec![x];
    if include_start {
        if cap == 0 {
            return OrbitRecord { start: x, elements, truncated: true };
        }
        level_of.insert(x, 0);
        elements.push((x, 0));
    }
    let mut level = 0u32;
    'bfs: while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for y in sys.images(v) {
                if level_of.contains_key(&y) {
                    continue;
                }
                if elements.len() == cap {
                    truncated = true;
                    break 'bfs;
                }
                level_of.insert(y, level);
                elements.push((y, level));
                next.push(y);
            }
        }
        frontier = next;
    }
    OrbitRecord { start: x, elements, truncated }
}

/// The value sets `{f(x) : f in F_n}` for `n = 0..=N`, each sorted.
pub fn level_images(sys: &ReducedSystem, x: FieldElement, n_max: usize) -> Vec<Vec<FieldElement>> {
    let mut levels = vec![vec![x]];
    for _ in 0..n_max {
        let prev = levels.last().expect("level 0 present");
        let set: HashSet<FieldElement> = prev.iter().flat_map(|&v| sys.images(v)).collect();
        let mut next: Vec<FieldElement> = set.into_iter().collect();
        next.sort_unstable();
        levels.push(next);
    }
    levels
}

/// Checks `k^n <= EXHAUSTIVE_WORD_LIMIT`.
pub(crate) fn exhaustive_guard(k: usize, n: usize) -> Result<()> {
    let total = (k as u128).checked_pow(n as u32);
    match total {
        Some(t) if t <= EXHAUSTIVE_WORD_LIMIT => Ok(()),
        _ => Err(Error::ExplosionGuard(format!(
            "k^N = {k}^{n} exceeds the exhaustive limit {EXHAUSTIVE_WORD_LIMIT}"
        ))),
    }
}

/// Every word of length `n` over `1..=k`, lexicographic.
pub(crate) fn all_words(k: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = (k as u64).pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut letters = vec![0u32; n];
        for slot in letters.iter_mut().rev() {
            *slot = (idx % k as u64) as u32 + 1;
            idx /= k as u64;
        }
        Word::new(letters)
    })
}

/// Same as [`level_images`] but by applying every word of each length.
pub fn level_images_exhaustive(sys: &ReducedSystem, x: FieldElement, n_max: usize) -> Result<Vec<Vec<FieldElement>>> {
    exhaustive_guard(sys.k(), n_max)?;
    (0..=n_max)
        .map(|n| {
            let mut set: Vec<FieldElement> = all_words(sys.k(), n)
                .map(|w| sys.apply_word(&w, x))
                .collect::<Result<_>>()?;
            set.sort_unstable();
            set.dedup();
            Ok(set)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn system(p: u64, gens: &[&str]) -> ReducedSystem {
        GeneratorSet::parse(gens)
            .unwrap()
            .reduce(&FieldContext::prime(p).unwrap())
            .unwrap()
    }

    fn el(sys: &ReducedSystem, i: u64) -> FieldElement {
        sys.ctx().element(i).unwrap()
    }

    fn idx(v: &[FieldElement]) -> Vec<u64> {
        v.iter().map(|e| e.index()).collect()
    }

    #[test]
    fn apply_word_examples() {
        let s5 = system(5, &["X^2", "X^2 + 1"]);
        assert_eq!(s5.apply_word(&Word::empty(), el(&s5, 4)).unwrap(), el(&s5, 4));
        assert_eq!(s5.apply_word(&Word::new(vec![1, 2]), el(&s5, 2)).unwrap(), el(&s5, 2));
        let s7 = system(7, &["X^2"]);
        assert_eq!(s7.apply_word(&Word::new(vec![1, 1]), el(&s7, 3)).unwrap(), el(&s7, 4));
        assert!(matches!(
            s7.apply_word(&Word::new(vec![2]), el(&s7, 3)),
            Err(Error::LetterOutOfRange { letter: 2, k: 1 })
        ));
    }

    #[test]
    fn orbit_examples() {
        let s7 = system(7, &["X^2"]);
        let o = orbit(&s7, el(&s7, 3), usize::MAX, true);
        assert_eq!(o.elements.iter().map(|&(e, l)| (e.index(), l)).collect::<Vec<_>>(), vec![(3, 0), (2, 1), (4, 2)]);
        assert_eq!(orbit(&s7, el(&s7, 1), usize::MAX, true).size(), 1);
        let s5 = system(5, &["X^2", "X^2 + 1"]);
        let mut o: Vec<u64> = orbit(&s5, el(&s5, 0), usize::MAX, true).elements.iter().map(|e| e.0.index()).collect();
        o.sort();
        assert_eq!(o, vec![0, 1, 2, 4]);
        // Without the start point 3 is not revisited.
        assert_eq!(orbit(&s7, el(&s7, 3), usize::MAX, false).size(), 2);
        let capped = orbit(&s5, el(&s5, 0), 2, true);
        assert!(capped.truncated);
        assert_eq!(capped.size(), 2);
    }

    #[test]
    fn degenerate_reduction() {
        let ctx = FieldContext::prime(7).unwrap();
        let err = GeneratorSet::parse(&["7X^2 + X"]).unwrap().reduce(&ctx).unwrap_err();
        assert_eq!(err, Error::DegenerateGenerator { index: 1, degree: 1 });
        assert!(err.to_string().starts_with("degenerate generator"));
        assert_eq!(GeneratorSet::parse(&["X + 1"]), Err(Error::DegreeTooSmall(1)));
        assert_eq!(GeneratorSet::new(vec![]), Err(Error::EmptySystem));
    }

    #[test]
    fn level_examples() {
        let s7 = system(7, &["X^2"]);
        let lv = level_images(&s7, el(&s7, 3), 3);
        assert_eq!(idx(&lv[1]), vec![2]);
        assert_eq!(idx(&lv[3]), vec![2]);
        let s5 = system(5, &["X^2", "X^2 + 1"]);
        let lv = level_images(&s5, el(&s5, 0), 2);
        assert_eq!(idx(&lv[1]), vec![0, 1]);
        assert_eq!(idx(&lv[2]), vec![0, 1, 2]);
        assert_eq!(level_images_exhaustive(&s5, el(&s5, 0), 2).unwrap(), lv);
        assert!(matches!(level_images_exhaustive(&s5, el(&s5, 0), 25), Err(Error::ExplosionGuard(_))));
    }

    #[test]
    fn composition_matches_field_evaluation() {
        let gens = GeneratorSet::parse(&["X^2 + 1", "2X^3 - X"]).unwrap();
        let ctx = FieldContext::prime(13).unwrap();
        let sys = gens.reduce(&ctx).unwrap();
        let w = Word::new(vec![1, 2, 2, 1]);
        let phi = gens.compose_word(&w).unwrap().reduce_mod(&ctx);
        for x in ctx.elements() {
            assert_eq!(phi.eval(&ctx, x), sys.apply_word(&w, x).unwrap());
        }
    }

    #[test]
    fn trajectory_follows_stream() {
        let s5 = system(5, &["X^2", "X^2 + 1"]);
        let st = WordStream::periodic(vec![2], vec![2, 1]).unwrap();
        assert_eq!(idx(&s5.trajectory(&st, el(&s5, 0), 4).unwrap()), vec![0, 1, 2, 4]);
        assert!(s5.trajectory(&st, el(&s5, 0), 0).unwrap().is_empty());
    }
}
