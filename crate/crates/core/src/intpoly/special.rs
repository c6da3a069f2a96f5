//! Chebyshev normal forms and detection of polynomials that are linearly
//! conjugate over Q to a monomial `c X^d` or to `±T_d`.
//!
//! For a target `N` of degree `d` with no `X^{d-1}` term and leading sign
//! `σ`, a conjugate `f(X) = (N(αX + β) - β) / α` has leading coefficient
//! `σ α^{d-1}` and `X^{d-1}` coefficient `σ d α^{d-2} β`. So `α` is a rational
//! `(d-1)`-th root and `β` is then forced; a coefficientwise comparison settles it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Largest Chebyshev index accepted.
const CHEBYSHEV_MAX_DEGREE: u32 = 10_000;

/// The monic Chebyshev polynomial with `T_d(X + 1/X) = X^d + X^-d`.
pub fn chebyshev(d: u32) -> Result<IntPolynomial> {
    if d == 0 || d > CHEBYSHEV_MAX_DEGREE {
        return Err(Error::OutOfRange(format!(
            "Chebyshev degree must lie in 1..={CHEBYSHEV_MAX_DEGREE}, got {d}"
        )));
    }
    let x = IntPolynomial::x();
    let mut prev = IntPolynomial::from_i64s(&[2]);
    let mut cur = x.clone();
    for _ in 1..d {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    MonomialConjugate,
    ChebyshevConjugate,
    NonSpecial,
}

impl SpecialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialKind::MonomialConjugate => "monomial_conjugate",
            SpecialKind::ChebyshevConjugate => "chebyshev_conjugate",
            SpecialKind::NonSpecial => "non_special",
        }
    }
}

/// `L(X) = alpha X + beta` over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub alpha: BigRational,
    pub beta: BigRational,
}

impl LinearMap {
    pub fn inverse(&self) -> LinearMap {
        let alpha = self.alpha.recip();
        let beta = -&self.beta * &alpha;
        LinearMap { alpha, beta }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialClassification {
    pub kind: SpecialKind,
    /// `L` together with the normal form `L^{-1} ∘ f ∘ L`.
    pub witness: Option<(LinearMap, IntPolynomial)>,
}

/// Dense rational polynomial, low-to-high, trimmed. Internal to this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub(crate) fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    fn from_int(f: &IntPolynomial) -> Self {
        RatPoly::new(
            f.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `self(alpha X + beta)`.
    fn compose_linear(&self, l: &LinearMap) -> RatPoly {
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.0.iter().rev() {
            // acc = acc * (alpha X + beta) + c
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a * &l.alpha;
                next[i] += a * &l.beta;
            }
            next[0] += c;
            acc = next;
        }
        RatPoly::new(acc)
    }

    /// `L^{-1} ∘ self ∘ L`.
    pub(crate) fn conjugate(&self, l: &LinearMap) -> RatPoly {
        let inner = self.compose_linear(l);
        inner.compose_linear_outer(&l.inverse())
    }

    /// `m(self)` for linear `m`.
    fn compose_linear_outer(&self, m: &LinearMap) -> RatPoly {
        let mut c: Vec<BigRational> = self.0.iter().map(|a| a * &m.alpha).collect();
        if c.is_empty() {
            c.push(BigRational::zero());
        }
        c[0] += &m.beta;
        RatPoly::new(c)
    }

    fn to_int(&self) -> Option<IntPolynomial> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<BigInt>>>()
            .map(IntPolynomial::new)
    }
}

/// Rational `e`-th roots of `a` (both signs when `e` is even).
fn rational_roots(a: &BigRational, e: u32) -> Vec<BigRational> {
    let exact = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(e);
        (num_traits::pow(r.clone(), e as usize) == *n).then_some(r)
    };
    let (num, den) = (a.numer().abs(), a.denom().abs());
    let (Some(rn), Some(rd)) = (exact(&num), exact(&den)) else {
        return Vec::new();
    };
    let root = BigRational::new(rn, rd);
    let positive = a.numer().is_positive() == a.denom().is_positive();
    match (positive, e % 2 == 0) {
        (true, true) => vec![root.clone(), -root],
        (true, false) => vec![root],
        (false, false) => vec![-root],
        (false, true) => Vec::new(),
    }
}

fn classify(f: &RatPoly) -> Result<(SpecialKind, Option<(LinearMap, RatPoly)>)> {
    let d = match f.degree() {
        Some(d) if d >= 2 => d,
        other => return Err(Error::DegreeTooSmall(other.unwrap_or(0))),
    };
    let lead = f.coeff(d);
    let next = f.coeff(d - 1);
    let dq = BigRational::from_integer(BigInt::from(d as u64));

    // Monomials c X^d: translate to kill the X^{d-1} term.
    let translate = LinearMap {
        alpha: BigRational::one(),
        beta: -&next / (&dq * &lead),
    };
    let centered = f.conjugate(&translate);
    if (0..d).all(|i| centered.coeff(i).is_zero()) {
        return Ok((SpecialKind::MonomialConjugate, Some((translate, centered))));
    }

    let cheb = RatPoly::from_int(&chebyshev(d as u32)?);
    let neg_cheb = RatPoly::new(cheb.0.iter().map(|c| -c).collect());
    for (target, sigma) in [(&cheb, BigRational::one()), (&neg_cheb, -BigRational::one())] {
        for alpha in rational_roots(&(&lead * &sigma), (d - 1) as u32) {
            let beta = &sigma * &next / (&dq * num_traits::pow(alpha.clone(), d - 2));
            // f = M^{-1} ∘ target ∘ M with M = alpha X + beta, so L = M^{-1}.
            let m = LinearMap { alpha, beta };
            let candidate = target.conjugate(&m);
            if &candidate == f {
                let l = m.inverse();
                debug_assert_eq!(&f.conjugate(&l), target);
                return Ok((SpecialKind::ChebyshevConjugate, Some((l, target.clone()))));
            }
        }
    }
    Ok((SpecialKind::NonSpecial, None))
}

/// Decides rational linear conjugacy to `c X^d` or `±T_d`.
pub fn is_special(f: &IntPolynomial) -> Result<SpecialClassification> {
    let (kind, witness) = classify(&RatPoly::from_int(f))?;
    let witness = witness.map(|(l, normal)| {
        let normal = normal
            .to_int()
            .unwrap_or_else(|| clear_denominators(&normal));
        (l, normal)
    });
    Ok(SpecialClassification { kind, witness })
}

// A centered monomial c X^d may have non-integral c; scaling X^d by the
// denominator keeps the reported form in Z[X] and is still a monomial.
fn clear_denominators(f: &RatPoly) -> IntPolynomial {
    let lcm = f
        .0
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    IntPolynomial::new(
        f.0.iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect(),
    )
}

#[cfg(test)]
pub(crate) fn classify_rational(f: &RatPoly) -> Result<SpecialKind> {
    classify(f).map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn kind(s: &str) -> SpecialKind {
        is_special(&p(s)).unwrap().kind
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev(1).unwrap(), p("X"));
        assert_eq!(chebyshev(2).unwrap(), p("X^2 - 2"));
        assert_eq!(chebyshev(3).unwrap(), p("X^3 - 3X"));
        assert_eq!(chebyshev(4).unwrap(), p("X^4 - 4X^2 + 2"));
        assert!(chebyshev(0).is_err());
    }

    #[test]
    fn chebyshev_functional_equation() {
        // T_d(x + 1/x) = x^d + x^-d at x = 2: T_d(5/2) = 2^d + 2^-d.
        for d in 1..12u32 {
            let t = RatPoly::from_int(&chebyshev(d).unwrap());
            let at = t.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * q(5, 2) + c);
            let expect = BigRational::from_integer(BigInt::from(2).pow(d)) + q(1, 1 << d);
            assert_eq!(at, expect, "d={d}");
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(kind("X^2"), SpecialKind::MonomialConjugate);
        assert_eq!(kind("X^2 - 2"), SpecialKind::ChebyshevConjugate);
        assert_eq!(kind("X^2 + 1"), SpecialKind::NonSpecial);
        assert_eq!(kind("-X^3"), SpecialKind::MonomialConjugate);
        // (X + 1)^2 - 1 = X^2 + 2X is X^2 moved by a translation.
        assert_eq!(kind("X^2 + 2X"), SpecialKind::MonomialConjugate);
        assert_eq!(kind("-X^3 + 3X"), SpecialKind::ChebyshevConjugate);
        assert_eq!(kind("2X^2 - 4X + 2"), SpecialKind::ChebyshevConjugate);
        assert_eq!(kind("2X^2 - 4X"), SpecialKind::NonSpecial);
        assert_eq!(kind("X^3 + X + 1"), SpecialKind::NonSpecial);
        assert_eq!(is_special(&p("X + 1")), Err(Error::DegreeTooSmall(1)));
    }

    #[test]
    fn witnesses_conjugate_to_normal_form() {
        for s in ["X^2", "X^2 - 2", "X^2 + 2X", "-X^3 + 3X", "2X^2 - 4X + 2", "X^3 - 6X^2 + 9X"] {
            let f = p(s);
            let c = is_special(&f).unwrap();
            let (l, normal) = c.witness.expect(s);
            let back = RatPoly::from_int(&f).conjugate(&l);
            let normal_q = RatPoly::from_int(&normal);
            if c.kind == SpecialKind::ChebyshevConjugate {
                assert_eq!(back, normal_q, "{s}");
            } else {
                // Monomial normal forms may have been rescaled to clear denominators.
                assert!((0..f.degree().unwrap()).all(|i| back.coeff(i).is_zero()), "{s}");
            }
        }
    }

    #[test]
    fn scaled_chebyshev_is_detected() {
        let m = LinearMap { alpha: q(3, 1), beta: q(-2, 1) };
        let t3 = RatPoly::from_int(&chebyshev(3).unwrap());
        let f = t3.conjugate(&m);
        assert_eq!(classify_rational(&f).unwrap(), SpecialKind::ChebyshevConjugate);
        let neg = RatPoly::new(t3.0.iter().map(|c| -c).collect()).conjugate(&m);
        assert_eq!(classify_rational(&neg).unwrap(), SpecialKind::ChebyshevConjugate);
    }

    proptest! {
        #[test]
        fn conjugated_monomials_are_detected(
            d in 2usize..6,
            an in prop_oneof![-9i64..-1, 1i64..9],
            ad in 1i64..9,
            bn in -9i64..9,
            bd in 1i64..9,
        ) {
            let l = LinearMap { alpha: q(an, ad), beta: q(bn, bd) };
            let mut mono = vec![BigRational::zero(); d];
            mono.push(BigRational::one());
            let conj = RatPoly::new(mono).conjugate(&l.inverse());
            prop_assert_eq!(classify_rational(&conj).unwrap(), SpecialKind::MonomialConjugate);
            if let Some(int) = conj.to_int() {
                prop_assert_eq!(is_special(&int).unwrap().kind, SpecialKind::MonomialConjugate);
            }
        }

        #[test]
        fn conjugated_chebyshev_is_detected(
            d in 2u32..6,
            an in prop_oneof![-5i64..-1, 1i64..5],
            ad in 1i64..5,
            bn in -5i64..5,
            bd in 1i64..5,
            negate in any::<bool>(),
        ) {
            let l = LinearMap { alpha: q(an, ad), beta: q(bn, bd) };
            let mut t = RatPoly::from_int(&chebyshev(d).unwrap());
            if negate {
                t = RatPoly::new(t.0.iter().map(|c| -c).collect());
            }
            let conj = t.conjugate(&l.inverse());
            prop_assert_eq!(classify_rational(&conj).unwrap(), SpecialKind::ChebyshevConjugate);
        }
    }
}
