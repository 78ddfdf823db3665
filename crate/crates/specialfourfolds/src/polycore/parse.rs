//! Polynomial parser.
//!
//! Grammar: integers, ring variables, `+ - * / ^` and parentheses. There is
//! no implicit multiplication: `2x` is a parse error, `2*x` is not. Division
//! is only allowed by nonzero constants, so rational coefficients like
//! `1/2*x` enter exactly and are reduced mod p.

use std::sync::Arc;

use thiserror::Error;

use super::poly::{Poly, PolyRing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("expected {0} at byte {1}")]
    Expected(&'static str, usize),
    #[error("division by a non-constant polynomial")]
    DivisionByNonConstant,
    #[error("division by zero in F_{0} (denominator divisible by the characteristic)")]
    DivisionByZero(u64),
    #[error("exponent {0} too large (max 255)")]
    ExponentTooLarge(u64),
    #[error("trailing input at byte {0}")]
    TrailingInput(usize),
    #[error("empty input")]
    Empty,
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::Expected("integer", start));
        }
        let p = self.ring.field.characteristic();
        let mut acc = 0u64;
        for &b in &self.src[start..self.pos] {
            acc = (acc * 10 + (b - b'0') as u64) % p;
        }
        Ok(acc)
    }

    fn raw_integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::Expected("integer", start));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u64>().map_err(|_| ParseError::ExponentTooLarge(u64::MAX))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
        } else {
            Err(ParseError::Expected("identifier", start))
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(ParseError::Expected("closing parenthesis", self.pos));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.ring, self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident()?;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(ParseError::UnknownVariable(name)),
                }
            }
            Some(c) => Err(ParseError::UnexpectedChar(c as char, self.pos)),
            None => Err(ParseError::Expected("operand", self.pos)),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.raw_integer()?;
            if e > 255 {
                return Err(ParseError::ExponentTooLarge(e));
            }
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if !d.is_constant() {
                    return Err(ParseError::DivisionByNonConstant);
                }
                if d.is_zero() {
                    return Err(ParseError::DivisionByZero(self.ring.field.characteristic()));
                }
                acc = acc.scale(self.ring.field.inv(d.lc()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.peek() == Some(b'-') {
                // leave the '-' for the next term's unary parser
                self.bump();
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parse one polynomial in the given ring.
pub fn parse_poly(ring: &Arc<PolyRing>, src: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { ring, src: src.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::TrailingInput(p.pos));
    }
    Ok(e)
}

/// Parse a list of polynomials (an ideal's generators).
pub fn parse_ideal(ring: &Arc<PolyRing>, gens: &[impl AsRef<str>]) -> Result<Vec<Poly>, ParseError> {
    gens.iter().map(|g| parse_poly(ring, g.as_ref())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::PrimeField;

    fn ring() -> Arc<PolyRing> {
        PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z"])
    }

    #[test]
    fn parses_spec_grammar() {
        let r = ring();
        let p = parse_poly(&r, "x^2 - y*z").unwrap();
        assert_eq!(p.to_string(), "x^2-y*z");
        let q = parse_poly(&r, "(x + y)^2 - 2*x*y").unwrap();
        assert_eq!(q.to_string(), "x^2+y^2");
    }

    #[test]
    fn rational_coefficients_reduce_mod_p() {
        let r = ring();
        let p = parse_poly(&r, "1/2*x").unwrap();
        let two = 2u64;
        assert_eq!(p.lc(), r.field.inv(two));
        assert!(matches!(
            parse_poly(&r, "x/65521"),
            Err(ParseError::DivisionByZero(65521))
        ));
        assert!(matches!(parse_poly(&r, "x/y"), Err(ParseError::DivisionByNonConstant)));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let r = ring();
        assert!(matches!(parse_poly(&r, "2x"), Err(ParseError::TrailingInput(_))));
        assert!(matches!(parse_poly(&r, "x y"), Err(ParseError::TrailingInput(_))));
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let r = ring();
        assert_eq!(
            parse_poly(&r, "x + w"),
            Err(ParseError::UnknownVariable("w".into()))
        );
    }

    #[test]
    fn print_parse_roundtrip() {
        let r = ring();
        for s in ["x^2-y*z", "3*x*y+z^3-1", "-x+2", "x*y*z", "0"] {
            let p = parse_poly(&r, s).unwrap();
            let q = parse_poly(&r, &p.to_string()).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn unary_minus_and_nesting() {
        let r = ring();
        let p = parse_poly(&r, "-(x - y)^2").unwrap();
        let q = parse_poly(&r, "-x^2 + 2*x*y - y^2").unwrap();
        assert_eq!(p, q);
    }
}
