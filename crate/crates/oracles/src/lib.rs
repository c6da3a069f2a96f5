//! Slow, obviously-correct reference implementations used only by tests.
//!
//! Nothing here depends on the main crate; inputs are plain integers and
//! coefficient vectors so that every check is independent of the code under test.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(f, g) as the Sylvester determinant; coefficients low-to-high, both nonzero.
pub fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let trim = |v: &[BigInt]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    };
    let (f, g) = (trim(f), trim(g));
    assert!(!f.is_empty() && !g.is_empty(), "zero polynomial");
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Schoolbook product of integer polynomials, low-to-high.
pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// All prime powers `p^s <= limit` as `(p, s)`.
pub fn prime_powers_up_to(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=limit).filter(|&p| is_prime_trial(p)) {
        let (mut q, mut s) = (p, 1);
        while q <= limit {
            out.push((p, s));
            q *= p;
            s += 1;
        }
    }
    out
}

/// F_{p^s} arithmetic straight from a monic modulus, elements as coefficient vectors.
#[derive(Debug, Clone)]
pub struct NaiveField {
    pub p: u64,
    pub modulus: Vec<u64>,
}

impl NaiveField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert_eq!(modulus.last(), Some(&1), "modulus must be monic");
        NaiveField { p, modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    /// Base-p digits of `index`, least significant first.
    pub fn unpack(&self, mut index: u64) -> Vec<u64> {
        (0..self.degree())
            .map(|_| {
                let c = index % self.p;
                index /= self.p;
                c
            })
            .collect()
    }

    pub fn pack(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.degree() == 1 {
            return a * b % self.p;
        }
        let (a, b) = (self.unpack(a), self.unpack(b));
        let s = self.degree();
        let mut prod = vec![0u64; 2 * s];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, m) in self.modulus.iter().enumerate() {
                let idx = top - s + i;
                prod[idx] = (prod[idx] + (self.p - c) * m) % self.p;
            }
        }
        prod.truncate(s);
        self.pack(&prod)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (a, b) = (self.unpack(a), self.unpack(b));
        let c: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&c)
    }

    /// Least `l >= 1` with `u^l = 1` by repeated multiplication.
    pub fn order_by_powering(&self, u: u64) -> u64 {
        assert_ne!(u, 0);
        let mut acc = u;
        let mut l = 1;
        while acc != 1 {
            acc = self.mul(acc, u);
            l += 1;
        }
        l
    }

    /// Horner evaluation of an integer polynomial (coefficients reduced mod p).
    pub fn eval(&self, poly: &[i64], x: u64) -> u64 {
        let p = self.p as i64;
        poly.iter().rev().fold(0, |acc, &c| {
            let c = c.rem_euclid(p) as u64;
            self.add(self.mul(acc, x), c)
        })
    }
}

fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = (1..p).find(|&x| x * b[db] % p == 1).expect("unit");
    while r.len() > db {
        let c = r.last().copied().unwrap() * inv_lead % p;
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// Irreducibility by trial division over every monic polynomial of degree `1..=s/2`.
pub fn is_irreducible_exhaustive(p: u64, f: &[u64]) -> bool {
    let s = f.len() - 1;
    for deg in 1..=s / 2 {
        for tail in 0..p.pow(deg as u32) {
            let mut g: Vec<u64> = (0..deg).map(|i| tail / p.pow(i as u32) % p).collect();
            g.push(1);
            if poly_rem_mod_p(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `s` in the order `c_0 + c_1 p + ...`.
pub fn first_irreducible(p: u64, s: u32) -> Vec<u64> {
    (0..p.pow(s))
        .map(|tail| {
            let mut g: Vec<u64> = (0..s).map(|i| tail / p.pow(i) % p).collect();
            g.push(1);
            g
        })
        .find(|g| s == 1 || is_irreducible_exhaustive(p, g))
        .expect("irreducibles exist in every degree")
}

/// Forward closure of `start` under `succ` (includes `start`).
pub fn closure(start: u64, succ: impl Fn(u64) -> Vec<u64>) -> BTreeSet<u64> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for y in succ(x) {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Every word of length `n` over `1..=k`, lexicographic.
pub fn all_words(k: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=k as u32).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// BFS distances in a graph with successor lists; `None` when unreachable.
pub fn distances(succ: &[Vec<usize>], u: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; succ.len()];
    dist[u] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x].unwrap();
        for &y in &succ[x] {
            if dist[y].is_none() {
                dist[y] = Some(dx + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// `L_N` by direct triple loop: `succ[x][i]` is the endpoint of label `i + 1`.
pub fn l_n_naive(succ: &[Vec<usize>], u: usize, a: &HashSet<usize>, n: usize, words: &[Vec<u32>]) -> usize {
    let dist = distances(succ, u);
    let near = |v: usize| dist[v].is_some_and(|d| d <= n);
    (0..succ.len())
        .filter(|&v| near(v))
        .filter(|&v| {
            words.iter().all(|w| {
                let end = w.iter().fold(v, |x, &letter| succ[x][letter as usize - 1]);
                near(end) && a.contains(&end)
            })
        })
        .count()
}

/// Node count of a complete `k`-ary tree of depth `h - 1`, built explicitly.
pub fn tree_nodes(k: usize, h: usize) -> usize {
    struct Node {
        children: Vec<Node>,
    }
    fn build(k: usize, depth: usize) -> Node {
        Node {
            children: if depth == 0 {
                Vec::new()
            } else {
                (0..k).map(|_| build(k, depth - 1)).collect()
            },
        }
    }
    fn count(n: &Node) -> usize {
        1 + n.children.iter().map(count).sum::<usize>()
    }
    count(&build(k, h - 1))
}

/// Exact minimum number of infinite walks from `start` whose visited sets cover
/// the whole orbit. `succ[x]` lists out-neighbours; the orbit must have at most 20 vertices.
pub fn minimal_walk_cover(start: usize, succ: &[Vec<usize>]) -> usize {
    let orbit: Vec<usize> = closure(start as u64, |x| succ[x as usize].iter().map(|&y| y as u64).collect())
        .into_iter()
        .map(|x| x as usize)
        .collect();
    assert!(orbit.len() <= 20, "orbit too large for exhaustive cover");
    let pos = |x: usize| orbit.iter().position(|&o| o == x).unwrap();
    // Every set visited by some finite prefix of a walk; infinite walks visit
    // exactly the union of their prefixes, and the orbit is finite.
    let mut masks = HashSet::new();
    let mut seen = HashSet::new();
    let init = (start, 1u32 << pos(start));
    let mut stack = vec![init];
    seen.insert(init);
    while let Some((x, m)) = stack.pop() {
        masks.insert(m);
        for &y in &succ[x] {
            let next = (y, m | 1 << pos(y));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    let full = (1u32 << orbit.len()) - 1;
    let masks: Vec<u32> = masks.into_iter().collect();
    let mut frontier = HashSet::from([0u32]);
    for used in 1.. {
        frontier = frontier
            .iter()
            .flat_map(|&f| masks.iter().map(move |&m| f | m))
            .collect();
        if frontier.contains(&full) {
            return used;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn sylvester_small() {
        assert_eq!(sylvester_resultant(&big(&[-1, 1]), &big(&[1, 1])), BigInt::from(2));
        assert_eq!(sylvester_resultant(&big(&[1, 0, 1]), &big(&[-1, 0, 1])), BigInt::from(4));
        assert_eq!(sylvester_resultant(&big(&[-2, 1]), &big(&[1, 0, 0, 1])), BigInt::from(9));
    }

    #[test]
    fn field_of_four() {
        let f = NaiveField::new(2, first_irreducible(2, 2));
        assert_eq!(f.modulus, vec![1, 1, 1]);
        assert_eq!(f.order_by_powering(2), 3);
    }

    #[test]
    fn cover_and_tree() {
        assert_eq!(tree_nodes(2, 3), 7);
        assert_eq!(tree_nodes(1, 5), 5);
        // X^2 and X^2 + 1 over F_5 from 0.
        let succ: Vec<Vec<usize>> = (0..5).map(|x| vec![x * x % 5, (x * x + 1) % 5]).collect();
        assert_eq!(minimal_walk_cover(0, &succ), 1);
    }
}
