//! Text form: `2X^3 - X + 5`. Terms may repeat and are summed; `x` and `*` are accepted.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

const MAX_PARSE_DEGREE: usize = 1 << 20;

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{k}")?,
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn eat_var(&mut self) -> bool {
        if matches!(self.peek(), Some(b'X' | b'x')) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<(BigInt, usize)> {
        let coeff = self.digits().map(|d| d.parse::<BigInt>().expect("digits"));
        let has_star = coeff.is_some() && self.peek() == Some(b'*');
        if has_star {
            self.pos += 1;
        }
        if !self.eat_var() {
            return match coeff {
                Some(c) if !has_star => Ok((c, 0)),
                _ if has_star => Err(self.err("expected X")),
                _ => {
                    let msg = match self.peek() {
                        None => "expected a term",
                        Some(_) => "unexpected character",
                    };
                    Err(self.err(msg))
                }
            };
        }
        let mut exp = 1usize;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            exp = d
                .parse::<usize>()
                .ok()
                .filter(|&e| e <= MAX_PARSE_DEGREE)
                .ok_or(Error::Parse {
                    pos: at,
                    msg: format!("exponent exceeds {MAX_PARSE_DEGREE}"),
                })?;
        }
        Ok((coeff.unwrap_or_else(BigInt::one), exp))
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor {
            s: s.as_bytes(),
            pos: 0,
        };
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let mut negative = false;
            match cur.peek() {
                None if first => return Err(cur.err("empty polynomial")),
                None => break,
                Some(b'-') => {
                    negative = true;
                    cur.pos += 1;
                }
                Some(b'+') => cur.pos += 1,
                _ if !first => return Err(cur.err("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let (c, k) = cur.term()?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            if negative {
                coeffs[k] -= c;
            } else {
                coeffs[k] += c;
            }
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_forms() {
        assert_eq!(IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]).to_string(), "X^4 - X^2 + 1");
        assert_eq!(IntPolynomial::from_i64s(&[0, 0, -1]).to_string(), "-X^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(IntPolynomial::from_i64s(&[-3, 1, 0, 2]).to_string(), "2X^3 + X - 3");
        assert_eq!(IntPolynomial::from_i64s(&[-1]).to_string(), "-1");
    }

    #[test]
    fn parse_variants() {
        let want = IntPolynomial::from_i64s(&[5, -1, 0, 2]);
        for s in ["2X^3 - X + 5", "2*x^3-x+5", " 5 - X + 2 X ^ 3 ", "X^3 + X^3 - X + 5"] {
            assert_eq!(s.parse::<IntPolynomial>().unwrap(), want, "{s}");
        }
        assert_eq!("-X^2".parse::<IntPolynomial>().unwrap(), IntPolynomial::from_i64s(&[0, 0, -1]));
        assert_eq!("X - X".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
        assert_eq!("0".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
    }

    #[test]
    fn error_positions() {
        for (s, pos) in [("", 0), ("X +", 3), ("X ^", 3), ("2 * 3", 4), ("X X", 2), ("X^2 + y", 6)] {
            match s.parse::<IntPolynomial>() {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "{s:?}"),
                other => panic!("{s:?} gave {other:?}"),
            }
        }
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(c in proptest::collection::vec(-1000i64..1000, 0..12)) {
            let f = IntPolynomial::from_i64s(&c);
            prop_assert_eq!(f.to_string().parse::<IntPolynomial>().unwrap(), f);
        }
    }
}
