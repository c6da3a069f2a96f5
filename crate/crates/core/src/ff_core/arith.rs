//! Integer arithmetic helpers: modular products, Miller-Rabin, and factorization
//! by trial division followed by Brent's variant of Pollard rho.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Factorization inputs must stay below this bound.
pub const FACTOR_LIMIT: u128 = 1 << 96;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Deterministic for n < 3.317e24 (Sorenson & Webster).
const MR_BASES_DETERMINISTIC: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// A complete prime factorization of `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: u128,
    /// `(prime, exponent)` pairs in increasing prime order.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors, sorted.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a * b mod m` for `m < 2^96`, `a, b < m`, without 256-bit intermediates.
fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return mul_mod_u64(a as u64, b as u64, m as u64) as u128;
    }
    debug_assert!(m < FACTOR_LIMIT);
    // b is split into three 32-bit chunks; each partial product stays below 2^128.
    let mut acc = 0u128;
    for shift in [64u32, 32, 0] {
        let chunk = (b >> shift) & 0xffff_ffff;
        acc = (acc << 32) % m;
        acc = (acc + (a * chunk) % m) % m;
    }
    acc
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: u128, d: u128, r: u32, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test: deterministic below 3.3e24, strong probable-prime test with
/// 25 bases above that (inputs are capped at 2^96).
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        let sp = sp as u128;
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let check = |a: u64| miller_rabin_round(n, d, r, a as u128);
    if n < MR_DETERMINISTIC_LIMIT {
        MR_BASES_DETERMINISTIC.iter().all(|&a| check(a))
    } else {
        SMALL_PRIMES.iter().all(|&a| check(a))
    }
}

// Brent's cycle detection with batched gcds. Returns a nontrivial factor or None.
fn rho_brent(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
    let mut y = 2u128;
    let mut x = y;
    let mut ys = y;
    let mut g = 1u128;
    let mut r = 1u64;
    let mut q = 1u128;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                let diff = x.abs_diff(y);
                q = mul_mod_u128(q, diff, n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        // Batch overshot; replay one step at a time.
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n && g > 1).then_some(g)
}

fn split(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    // Perfect squares defeat rho with some constants; peel them first.
    let root = n.isqrt();
    if root * root == n {
        split(root, out);
        split(root, out);
        return;
    }
    let mut c = 1u128;
    loop {
        if let Some(d) = rho_brent(n, c) {
            split(d, out);
            split(n / d, out);
            return;
        }
        c += 1;
    }
}

/// Complete factorization of `1 <= n < 2^96`.
pub fn factorize(n: u128) -> Result<Factorization> {
    if n == 0 || n >= FACTOR_LIMIT {
        return Err(Error::OutOfRange(format!(
            "factorize expects 1 <= n < 2^96, got {n}"
        )));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let mut d = 2u128;
    while d <= 1000 && d * d <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

/// Number of distinct primes dividing `|n|`.
pub fn omega_distinct_primes(n: &BigInt) -> Result<usize> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let abs = n.abs().to_u128().filter(|&v| v < FACTOR_LIMIT).ok_or_else(|| {
        Error::OutOfRange(format!("|n| must be below 2^96, got {} bits", n.bits()))
    })?;
    Ok(factorize(abs)?.factors.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(
            factorize(2_147_483_647).unwrap().factors,
            vec![(2_147_483_647, 1)]
        );
        assert!(factorize(0).is_err());
        assert!(factorize(FACTOR_LIMIT).is_err());
    }

    #[test]
    fn factorize_large_semiprimes() {
        // Two 31-bit primes and a 40-bit by 41-bit pair.
        let n = 2_147_483_647u128 * 2_147_483_629;
        assert_eq!(
            factorize(n).unwrap().factors,
            vec![(2_147_483_629, 1), (2_147_483_647, 1)]
        );
        let (a, b) = (1_099_511_627_791u128, 2_199_023_255_579u128);
        assert!(is_prime(a) && is_prime(b));
        assert_eq!(factorize(a * b).unwrap().factors, vec![(a, 1), (b, 1)]);
        let sq = 4_294_967_291u128 * 4_294_967_291;
        assert_eq!(factorize(sq).unwrap().factors, vec![(4_294_967_291, 2)]);
    }

    #[test]
    fn primality_known_values() {
        assert!(!is_prime(0) && !is_prime(1) && is_prime(2));
        assert!(!is_prime(4));
        // Strong pseudoprime to bases 2..37 below 2^64 would break a short base set.
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(561));
    }

    #[test]
    fn mul_mod_wide_matches_bigint() {
        let m = (1u128 << 95) + 12345;
        let a = (1u128 << 94) + 987_654_321;
        let b = m - 3;
        let expect = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(m);
        assert_eq!(BigInt::from(mul_mod_u128(a, b, m)), expect);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_distinct_primes(&BigInt::from(1)).unwrap(), 0);
        assert_eq!(omega_distinct_primes(&BigInt::from(12)).unwrap(), 2);
        assert_eq!(omega_distinct_primes(&BigInt::from(-30)).unwrap(), 3);
        assert_eq!(
            omega_distinct_primes(&BigInt::from(0)),
            Err(Error::ZeroArgument)
        );
    }
}
