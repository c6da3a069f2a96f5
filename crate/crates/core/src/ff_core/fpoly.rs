//! Dense polynomials over a prime field, coefficients low-to-high. Only what the
//! irreducibility test needs.

use super::arith::mul_mod_u64;

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, p);
        }
        base = mul_mod_u64(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod_u64(r[top], lead_inv, p);
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - mul_mod_u64(c, mi, p)) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_u64(x, y, p)) % p;
        }
    }
    rem(&out, m, p)
}

/// `base^e mod m`.
pub(crate) fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn distinct_primes(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// X^(p^k) mod m via k successive p-th powers.
fn frobenius_power(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = pow_mod(&x, p as u128, m, p);
    }
    x
}

/// Rabin's test for a monic `f` of degree `s >= 1`.
pub(crate) fn is_irreducible_rabin(f: &[u64], p: u64) -> bool {
    let s = (f.len() - 1) as u32;
    if s == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = [0u64, 1];
    if sub(&frobenius_power(s, f, p), &rem(&x, f, p), p) != Vec::<u64>::new() {
        return false;
    }
    for r in distinct_primes(s) {
        let h = sub(&frobenius_power(s / r, f, p), &x, p);
        if gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Exhaustive check that `f` has no monic factor of degree `1..=deg/2`.
pub(crate) fn has_no_small_factor(f: &[u64], p: u64) -> bool {
    let s = f.len() - 1;
    for deg in 1..=s / 2 {
        let count = (p as u128).pow(deg as u32);
        for m in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut rest = m;
            for _ in 0..deg {
                g.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            g.push(1);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u64, 3, 5, 7] {
            for s in 2..=4usize {
                let count = p.pow(s as u32);
                for m in 0..count {
                    let mut f: Vec<u64> = (0..s).map(|i| (m / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    assert_eq!(
                        is_irreducible_rabin(&f, p),
                        has_no_small_factor(&f, p),
                        "p={p} f={f:?}"
                    );
                }
            }
        }
    }
}
