//! Reader for the text form of Novikov scalars.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rational_to_exp, BaseField, NovikovError, NovikovScalar, Poly};

pub fn parse_rational(s: &str) -> Result<BigRational, NovikovError> {
    let t = s.trim();
    BigRational::from_str(t).map_err(|_| NovikovError::Parse(format!("bad rational '{t}'")))
}

/// Accepts `(<sum>)/(<sum>)`, `(<sum>)` or a bare `<sum>`, where a sum is
/// made of terms `c*s^(e)`, `s^(e)` or `c`.
pub fn parse_scalar(field: BaseField, s: &str) -> Result<NovikovScalar, NovikovError> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        field,
    };
    p.ws();
    let out = if p.peek() == Some(b'(') {
        p.pos += 1;
        let num = p.sum()?;
        p.expect(b')')?;
        p.ws();
        if p.peek() == Some(b'/') {
            p.pos += 1;
            p.ws();
            p.expect(b'(')?;
            let den = p.sum()?;
            p.expect(b')')?;
            NovikovScalar::from_fraction(field, num, den)?
        } else {
            NovikovScalar::from_poly(field, num)
        }
    } else {
        NovikovScalar::from_poly(field, p.sum()?)
    };
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: BaseField,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> NovikovError {
        NovikovError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), NovikovError> {
        self.ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Poly, NovikovError> {
        let mut terms = Vec::new();
        self.ws();
        let mut sign = BigRational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (e, c) = self.term()?;
            terms.push((e, self.field.reduce(c * &sign)));
            self.ws();
            match self.peek() {
                Some(b'+') => sign = BigRational::one(),
                Some(b'-') => sign = -BigRational::one(),
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Poly::from_terms(self.field, terms))
    }

    fn term(&mut self) -> Result<(super::Exp, BigRational), NovikovError> {
        self.ws();
        let coef = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            Some(self.rational()?)
        } else {
            None
        };
        self.ws();
        if coef.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            self.ws();
        }
        let exp = if self.peek() == Some(b's') {
            self.pos += 1;
            self.ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.ws();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    self.ws();
                    let neg = self.sign();
                    let r = self.rational()?;
                    self.expect(b')')?;
                    if neg {
                        -r
                    } else {
                        r
                    }
                } else {
                    let neg = self.sign();
                    let r = self.rational()?;
                    if neg {
                        -r
                    } else {
                        r
                    }
                }
            } else {
                BigRational::one()
            }
        } else if coef.is_some() {
            BigRational::zero()
        } else {
            return Err(self.err("expected term"));
        };
        Ok((rational_to_exp(&exp)?, coef.unwrap_or_else(BigRational::one)))
    }

    fn sign(&mut self) -> bool {
        self.ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn rational(&mut self) -> Result<BigRational, NovikovError> {
        self.ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if start == self.pos {
            return Err(self.err("expected number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let r = parse_rational(text)?;
        if r.denom().is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(r)
    }
}
