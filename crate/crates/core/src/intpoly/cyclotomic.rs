//! Cyclotomic polynomials, memoized process-wide.
//!
//! `Phi_n = prod_{d | n} (X^d - 1)^{mu(n/d)}`: the binomials with `mu = 1` are
//! multiplied in first, then those with `mu = -1` are removed by exact division.
//! Both steps are sparse, so each costs O(deg) per binomial.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntPolynomial;
use crate::error::{Error, Result};

pub const CYCLOTOMIC_MAX_INDEX: u64 = 100_000;

type Cache = RwLock<HashMap<u64, Arc<IntPolynomial>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial, `1 <= n <= 100000`.
pub fn cyclotomic(n: u64) -> Result<Arc<IntPolynomial>> {
    if n == 0 || n > CYCLOTOMIC_MAX_INDEX {
        return Err(Error::OutOfRange(format!(
            "cyclotomic index must lie in 1..={CYCLOTOMIC_MAX_INDEX}, got {n}"
        )));
    }
    if let Some(hit) = cache().read().expect("cache lock").get(&n) {
        return Ok(Arc::clone(hit));
    }
    // Computed outside the lock; concurrent misses produce identical values and
    // the first insert wins.
    let fresh = Arc::new(compute(n));
    let mut guard = cache().write().expect("cache lock");
    Ok(Arc::clone(guard.entry(n).or_insert(fresh)))
}

fn mobius_and_divisors(n: u64) -> Vec<(u64, i8)> {
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    // Only squarefree n/d contribute: n/d ranges over products of subsets of primes.
    (0u32..1 << primes.len())
        .map(|mask| {
            let (mut prod, mut sign) = (1u64, 1i8);
            for (i, &p) in primes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod *= p;
                    sign = -sign;
                }
            }
            (n / prod, sign)
        })
        .collect()
}

fn compute(n: u64) -> IntPolynomial {
    let terms = mobius_and_divisors(n);
    let mut poly: Vec<BigInt> = vec![BigInt::from(1)];
    for &(d, _) in terms.iter().filter(|t| t.1 == 1) {
        // poly * (X^d - 1)
        let d = d as usize;
        let mut next = vec![BigInt::zero(); poly.len() + d];
        for (i, c) in poly.iter().enumerate() {
            next[i + d] += c;
            next[i] -= c;
        }
        poly = next;
    }
    for &(d, _) in terms.iter().filter(|t| t.1 == -1) {
        // poly / (X^d - 1): q_j = P_{j+d} + q_{j+d}, from the top down.
        let d = d as usize;
        let qlen = poly.len() - d;
        let mut q = vec![BigInt::zero(); qlen];
        for j in (0..qlen).rev() {
            let above = q.get(j + d).cloned().unwrap_or_default();
            q[j] = &poly[j + d] + above;
        }
        debug_assert!((0..d).all(|i| {
            let qi = q.get(i).cloned().unwrap_or_default();
            poly[i] == -qi
        }));
        poly = q;
    }
    IntPolynomial::new(poly)
}
