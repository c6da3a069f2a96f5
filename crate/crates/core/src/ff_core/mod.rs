//! Exact arithmetic in F_p and F_{p^s}, multiplicative orders, and the sets of
//! small-order points.
//!
//! Elements are stored packed: the coefficient vector `(c_0, ..., c_{s-1})` of
//! an element with respect to the power basis of the modulus is encoded as the
//! integer `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`. For prime fields this is just
//! the residue itself, and integer constants `0 <= c < p` embed as themselves in
//! every extension.

mod arith;
mod fpoly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use arith::{factorize, is_prime, omega_distinct_primes, Factorization, FACTOR_LIMIT};

/// Largest extension degree accepted by [`FieldContext::extension`].
pub const MAX_EXTENSION_DEGREE: u32 = 16;
/// Fields above this size are rejected by order computations.
pub const ORDER_FIELD_LIMIT: u64 = 1 << 48;
/// Upper bound on the number of points [`FieldContext::small_order_set`] materializes.
pub const SMALL_ORDER_SET_LIMIT: u128 = 1 << 24;

/// An element of some [`FieldContext`], in packed base-`p` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0)
    }
}

#[derive(Debug)]
struct GroupData {
    order_factors: Factorization,
    generator: FieldElement,
}

/// The finite field F_{p^s}. Cheap to clone; clones share the lazily computed
/// factorization of `q - 1` and the primitive element.
#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u64,
    s: u32,
    q: u64,
    /// Monic, low-to-high, length `s + 1`.
    modulus: Vec<u64>,
    group: Arc<OnceLock<GroupData>>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

/// Builds F_p.
pub fn make_prime_field(p: u64) -> Result<FieldContext> {
    FieldContext::prime(p)
}

/// Builds F_{p^s} with the lexicographically first irreducible monic modulus.
pub fn make_extension_field(p: u64, s: u32) -> Result<FieldContext> {
    FieldContext::extension(p, s)
}

impl FieldContext {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p as u128) {
            return Err(Error::CompositeModulus(p as u128));
        }
        Ok(Self::assemble(p, 1, p, vec![0, 1]))
    }

    pub fn extension(p: u64, s: u32) -> Result<Self> {
        if s == 0 || s > MAX_EXTENSION_DEGREE {
            return Err(Error::DegreeOutOfRange(s));
        }
        if !is_prime(p as u128) {
            return Err(Error::CompositeModulus(p as u128));
        }
        if s == 1 {
            return Self::prime(p);
        }
        let q = p
            .checked_pow(s)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{s} does not fit in 64 bits")))?;
        let modulus = first_irreducible(p, s as usize);
        Ok(Self::assemble(p, s, q, modulus))
    }

    fn assemble(p: u64, s: u32, q: u64, modulus: Vec<u64>) -> Self {
        Self {
            p,
            s,
            q,
            modulus,
            group: Arc::new(OnceLock::new()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    /// Cardinality `q = p^s`.
    pub fn size(&self) -> u64 {
        self.q
    }

    /// The defining modulus, low-to-high coefficients (`[0, 1]`, i.e. `X`, for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with packed index `index`.
    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::OutOfRange(format!(
                "element index {index} is not below q = {}",
                self.q
            )));
        }
        Ok(FieldElement(index))
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: &BigInt) -> FieldElement {
        let r = n.mod_floor(&BigInt::from(self.p));
        FieldElement(r.to_u64().expect("residue below p"))
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        FieldElement((n as i128).rem_euclid(self.p as i128) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.s as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::OutOfRange(format!(
                "coefficient vector {coeffs:?} is not reduced for F_{}^{}",
                self.p, self.s
            )));
        }
        Ok(FieldElement(self.pack(coeffs)))
    }

    /// Coefficient vector of length `s`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut out = vec![0u64; self.s as usize];
        let mut rest = x.0;
        for c in out.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    fn pack(&self, coeffs: &[u64]) -> u64 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    fn unpack(&self, x: FieldElement, out: &mut [u64; 16]) {
        let mut rest = x.0;
        for c in out.iter_mut().take(self.s as usize) {
            *c = rest % self.p;
            rest /= self.p;
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.s == 1 {
            let (sum, carry) = a.0.overflowing_add(b.0);
            let r = if carry || sum >= self.p {
                sum.wrapping_sub(self.p)
            } else {
                sum
            };
            return FieldElement(r);
        }
        let (mut x, mut y) = ([0u64; 16], [0u64; 16]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        for i in 0..self.s as usize {
            x[i] = (x[i] + y[i]) % self.p;
        }
        FieldElement(self.pack(&x[..self.s as usize]))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.s == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = [0u64; 16];
        self.unpack(a, &mut x);
        for c in x.iter_mut().take(self.s as usize) {
            *c = (self.p - *c) % self.p;
        }
        FieldElement(self.pack(&x[..self.s as usize]))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        if self.s == 1 {
            return if p <= u32::MAX as u64 {
                FieldElement(a.0 * b.0 % p)
            } else {
                FieldElement(arith::mul_mod_u64(a.0, b.0, p))
            };
        }
        // s >= 2 forces p < 2^32, so single products fit in u64.
        let s = self.s as usize;
        let (mut x, mut y) = ([0u64; 16], [0u64; 16]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        let mut prod = [0u64; 32];
        for i in 0..s {
            if x[i] == 0 {
                continue;
            }
            for j in 0..s {
                prod[i + j] = (prod[i + j] + x[i] * y[j] % p) % p;
            }
        }
        for top in (s..2 * s - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..s {
                let idx = top - s + j;
                prod[idx] = (prod[idx] + p - c * self.modulus[j] % p) % p;
            }
            prod[top] = 0;
        }
        FieldElement(self.pack(&prod[..s]))
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.q as u128 - 2))
    }

    fn check_order_size(&self) -> Result<()> {
        if self.q > ORDER_FIELD_LIMIT {
            return Err(Error::FieldTooLarge(format!(
                "q = {} exceeds the 2^48 cap for order computations",
                self.q
            )));
        }
        Ok(())
    }

    fn group(&self) -> Result<&GroupData> {
        self.check_order_size()?;
        Ok(self.group.get_or_init(|| {
            let order_factors = factorize(self.q as u128 - 1).expect("q - 1 below 2^48");
            let generator = self.find_generator(&order_factors);
            GroupData {
                order_factors,
                generator,
            }
        }))
    }

    fn find_generator(&self, order_factors: &Factorization) -> FieldElement {
        let n = self.q as u128 - 1;
        if n == 1 {
            return self.one();
        }
        (2..self.q)
            .map(FieldElement)
            .find(|&g| {
                order_factors
                    .primes()
                    .all(|r| self.pow(g, n / r) != self.one())
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Factorization of `q - 1`.
    pub fn group_order_factors(&self) -> Result<&Factorization> {
        Ok(&self.group()?.order_factors)
    }

    /// The first of `2, 3, ...` (packed order) generating F_q^*.
    pub fn primitive_element(&self) -> Result<FieldElement> {
        Ok(self.group()?.generator)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mul_order(&self, u: FieldElement) -> Result<u64> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        let group = self.group()?;
        let mut order = self.q as u128 - 1;
        for &(r, e) in &group.order_factors.factors {
            for _ in 0..e {
                if self.pow(u, order / r) == self.one() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order as u64)
    }

    /// All nonzero `x` with multiplicative order at most `t`, sorted.
    pub fn small_order_set(&self, t: u64) -> Result<Vec<FieldElement>> {
        if t == 0 {
            return Err(Error::OutOfRange("t must be at least 1".into()));
        }
        let group = self.group()?;
        let n = self.q as u128 - 1;
        let orders: Vec<u128> = group
            .order_factors
            .divisors()
            .into_iter()
            .filter(|&l| l <= t as u128)
            .collect();
        let total: u128 = orders.iter().map(|&l| euler_phi(&group.order_factors, l)).sum();
        if total > SMALL_ORDER_SET_LIMIT {
            return Err(Error::TooLarge(format!(
                "small-order set would hold {total} points"
            )));
        }
        let mut out = Vec::with_capacity(total as usize);
        for l in orders {
            // Elements of exact order l are g^{j (q-1)/l} with gcd(j, l) = 1.
            let step = self.pow(group.generator, n / l);
            let mut x = self.one();
            for j in 0..l {
                if j.gcd(&l) == 1 {
                    out.push(x);
                }
                x = self.mul(x, step);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Euler phi of a divisor `l` of the factored number.
fn euler_phi(of: &Factorization, l: u128) -> u128 {
    let mut phi = l;
    for r in of.primes() {
        if l % r == 0 {
            phi = phi / r * (r - 1);
        }
    }
    phi
}

fn first_irreducible(p: u64, s: usize) -> Vec<u64> {
    let count = (p as u128).pow(s as u32);
    for m in 0..count {
        // Constant coefficient is the least significant digit of m.
        let mut f = Vec::with_capacity(s + 1);
        let mut rest = m;
        for _ in 0..s {
            f.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        f.push(1);
        if fpoly::is_irreducible_rabin(&f, p) {
            if s <= 4 && (p as u128).pow(s as u32 / 2) <= 1 << 16 {
                assert!(
                    fpoly::has_no_small_factor(&f, p),
                    "Rabin test accepted a reducible modulus {f:?} over F_{p}"
                );
            }
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A polynomial with coefficients in a fixed [`FieldContext`], low-to-high, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldPoly {
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, ctx: &FieldContext, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        assert_eq!(make_prime_field(7).unwrap().size(), 7);
        assert_eq!(make_prime_field(4), Err(Error::CompositeModulus(4)));
        assert_eq!(make_prime_field(1), Err(Error::CompositeModulus(1)));
        assert_eq!(make_prime_field(2_147_483_647).unwrap().size(), 2_147_483_647);
    }

    #[test]
    fn extension_construction() {
        let f2 = make_extension_field(2, 1).unwrap();
        assert_eq!(f2.size(), 2);
        let f4 = make_extension_field(2, 2).unwrap();
        assert_eq!(f4.size(), 4);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = make_extension_field(3, 2).unwrap();
        assert_eq!(f9.size(), 9);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(
            make_extension_field(2, 17),
            Err(Error::DegreeOutOfRange(17))
        );
        assert_eq!(make_extension_field(2, 0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(make_extension_field(9, 2), Err(Error::CompositeModulus(9)));
        assert!(matches!(
            make_extension_field(65_537, 5),
            Err(Error::FieldTooLarge(_))
        ));
        assert_eq!(make_extension_field(2, 16).unwrap().size(), 65_536);
    }

    #[test]
    fn order_examples() {
        let f7 = make_prime_field(7).unwrap();
        let e = |n| f7.element(n).unwrap();
        assert_eq!(f7.mul_order(e(1)).unwrap(), 1);
        assert_eq!(f7.mul_order(e(2)).unwrap(), 3);
        assert_eq!(f7.mul_order(e(3)).unwrap(), 6);
        assert_eq!(f7.mul_order(e(0)), Err(Error::ZeroElement));
        let f4 = make_extension_field(2, 2).unwrap();
        assert_eq!(f4.mul_order(f4.one()).unwrap(), 1);
    }

    #[test]
    fn order_rejects_huge_fields() {
        let big = make_prime_field(18_446_744_073_709_551_557).unwrap();
        let x = big.element(3).unwrap();
        assert!(matches!(big.mul_order(x), Err(Error::FieldTooLarge(_))));
        // Arithmetic itself still works.
        assert_eq!(big.mul(big.neg(big.one()), big.neg(big.one())), big.one());
    }

    #[test]
    fn small_order_set_examples() {
        let f7 = make_prime_field(7).unwrap();
        let ids = |t| -> Vec<u64> {
            f7.small_order_set(t)
                .unwrap()
                .into_iter()
                .map(FieldElement::index)
                .collect()
        };
        assert_eq!(ids(1), vec![1]);
        assert_eq!(ids(3), vec![1, 2, 4, 6]);
        assert_eq!(ids(6), vec![1, 2, 3, 4, 5, 6]);
        assert!(f7.small_order_set(0).is_err());
    }

    #[test]
    fn from_int_and_i64_agree() {
        let f7 = make_prime_field(7).unwrap();
        for n in -20i64..20 {
            assert_eq!(f7.from_i64(n), f7.from_int(&BigInt::from(n)));
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f27 = make_extension_field(3, 3).unwrap();
        for x in f27.elements() {
            assert_eq!(f27.from_coeffs(&f27.coeffs(x)).unwrap(), x);
        }
    }

    #[test]
    fn field_poly_eval() {
        let f5 = make_prime_field(5).unwrap();
        let poly = FieldPoly::new(vec![f5.one(), f5.zero(), f5.one(), f5.zero()]);
        assert_eq!(poly.degree(), Some(2));
        assert_eq!(poly.eval(&f5, f5.element(2).unwrap()).index(), 0);
    }
}
