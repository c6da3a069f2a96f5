//! Arbitrary-precision integer polynomials.

mod cyclotomic;
mod resultant;
mod special;
mod text;

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ff_core::{FieldContext, FieldPoly};

pub use cyclotomic::{cyclotomic, CYCLOTOMIC_MAX_INDEX};
pub use special::{chebyshev, is_special, LinearMap, SpecialClassification, SpecialKind};

/// A polynomial in Z[X], coefficients stored low-to-high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The identity polynomial `X`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Coefficients low-to-high; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(X))`, by Horner's rule.
    pub fn compose(&self, inner: &IntPolynomial) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, sign preserved.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.exact_div_scalar(&c)
    }

    pub(crate) fn exact_div_scalar(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) self = q d + r`.
    pub fn pseudo_rem(&self, divisor: &IntPolynomial) -> Result<Self> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(ds) = self.degree() else {
            return Ok(Self::zero());
        };
        if ds < dd {
            return Ok(self.clone());
        }
        let lead = divisor.leading_coeff().expect("nonzero divisor");
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].clone();
            for a in r.iter_mut() {
                *a *= lead;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[top - dd + i] -= &c * d;
            }
            steps += 1;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        let missing = (ds - dd + 1) as u32 - steps;
        let factor = num_traits::pow(lead.clone(), missing as usize);
        Ok(Self::new(r).scale(&factor))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        if !divisor.leading_coeff().is_some_and(One::is_one) {
            return Err(Error::OutOfRange("divisor must be monic".into()));
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = std::mem::take(&mut r[top]);
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs[..dd].iter().enumerate() {
                r[top - dd + i] -= &c * d;
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Primitive gcd over Q, normalized to a positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> Self {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("b is nonzero");
            a = b;
            b = r.primitive_part();
        }
        if a.leading_coeff().is_some_and(Signed::is_negative) {
            a = -a;
        }
        a
    }

    /// Exact resultant, via the subresultant remainder sequence.
    pub fn resultant(&self, other: &IntPolynomial) -> Result<BigInt> {
        resultant::resultant(self, other)
    }

    /// Logarithmic Weil height `log max |a_i|` of the primitive part.
    pub fn height(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let prim = self.primitive_part();
        let max = prim
            .coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .expect("nonzero polynomial");
        Ok(ln_bigint(&max))
    }

    /// Coefficients reduced into F_p inside the given field.
    pub fn reduce_mod(&self, ctx: &FieldContext) -> FieldPoly {
        FieldPoly::new(self.coeffs.iter().map(|c| ctx.from_int(c)).collect())
    }
}

/// Natural log of a positive integer, robust to values beyond `f64` range.
pub(crate) fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `h(F) = max_i h(phi_i)`.
pub fn system_height(system: &[IntPolynomial]) -> Result<f64> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    system
        .iter()
        .map(IntPolynomial::height)
        .try_fold(f64::NEG_INFINITY, |acc, h| Ok(acc.max(h?)))
}

/// Upper bound on the height of an `n`-fold composition from a system of maximal
/// degree `d` and height `h_f`:
/// `(d^n - 1)/(d - 1) h_f + d^2 (d^(n-1) - 1)/(d - 1) log 8`.
pub fn composition_height_bound(n: u32, d: u32, h_f: f64) -> Result<f64> {
    if n < 1 || d < 2 || !(h_f >= 0.0) || !h_f.is_finite() {
        return Err(Error::OutOfRange(format!(
            "composition_height_bound needs n >= 1, d >= 2, finite h_f >= 0 (got n={n}, d={d}, h_f={h_f})"
        )));
    }
    let d = d as f64;
    let geom = |m: u32| (d.powi(m as i32) - 1.0) / (d - 1.0);
    Ok(geom(n) * h_f + d * d * geom(n - 1) * 8f64.ln())
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -(self.clone())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
