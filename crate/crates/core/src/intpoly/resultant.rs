//! Resultants over Z by the subresultant polynomial remainder sequence
//! (Collins; the formulation in Cohen, Algorithm 3.3.7).
//!
//! Convention: `Res(F, G) = lc(F)^deg G * prod G(a)` over the roots `a` of `F`,
//! which matches the determinant of the Sylvester matrix.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

pub(super) fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    if df == 0 {
        return Ok(pow(f.leading_coeff().expect("nonzero"), dg));
    }
    if dg == 0 {
        return Ok(pow(g.leading_coeff().expect("nonzero"), df));
    }

    let mut sign_negative = false;
    let (mut a, mut b) = (f.clone(), g.clone());
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            sign_negative = true;
        }
    }
    let (ca, cb) = (a.content(), b.content());
    let a_deg = a.degree().expect("nonzero");
    let b_deg = b.degree().expect("nonzero");
    let t = pow(&ca, b_deg) * pow(&cb, a_deg);
    a = a.exact_div_scalar(&ca);
    b = b.exact_div_scalar(&cb);

    let mut g_acc = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().expect("nonzero"), b.degree().expect("nonzero"));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = a.pseudo_rem(&b)?;
        a = b;
        b = r.exact_div_scalar(&(&g_acc * pow(&h, delta)));
        g_acc = a.leading_coeff().expect("nonzero").clone();
        h = match delta {
            0 => h,
            1 => g_acc.clone(),
            _ => pow(&g_acc, delta) / pow(&h, delta - 1),
        };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = a.degree().expect("nonzero");
    let lb = b.leading_coeff().expect("nonzero constant");
    let h_final = if da == 1 {
        lb.clone()
    } else {
        pow(lb, da) / pow(&h, da - 1)
    };
    let res = t * h_final;
    Ok(if sign_negative { -res } else { res })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn res(a: &str, b: &str) -> BigInt {
        p(a).resultant(&p(b)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(res("X - 1", "X + 1"), BigInt::from(2));
        assert_eq!(res("X^2 + 1", "X^2 - 1"), BigInt::from(4));
        assert_eq!(res("X^3 + 2X + 5", "7"), BigInt::from(343));
        assert_eq!(res("7", "X^3 + 2X + 5"), BigInt::from(343));
        assert_eq!(res("3", "5"), BigInt::from(1));
        assert_eq!(res("X^2 - 1", "X - 1"), BigInt::from(0));
        // Res(X - 1, X^2) = 1 and Res(X + 1, X^2) = 1.
        assert_eq!(res("X - 1", "X^2"), BigInt::from(1));
        assert_eq!(res("X + 1", "X^2"), BigInt::from(1));
        assert_eq!(
            p("X").resultant(&IntPolynomial::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn product_formula_for_linear_factors() {
        // F = 2(X - 1)(X - 3), G = X^2 + 5: Res = 2^2 G(1) G(3) = 4 * 6 * 14.
        assert_eq!(res("2X^2 - 8X + 6", "X^2 + 5"), BigInt::from(4 * 6 * 14));
        // Swapping odd-degree arguments flips the sign.
        assert_eq!(res("X - 2", "X^3 + 1"), BigInt::from(9));
        assert_eq!(res("X^3 + 1", "X - 2"), BigInt::from(-9));
    }
}
