//! Text grammar for single-term radicals:
//!
//! ```text
//! expr   := factor (('*' | '/') factor)*
//! factor := '-' factor | '+' factor | int | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Every accepted string denotes one value r·√s; `sqrt` needs a rational,
//! non-negative argument.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Radical, Rational};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Radical> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    let inv = d.recip().ok_or_else(|| Error::parse(at, "division by zero"))?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Radical> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let n: BigInt = text.parse().map_err(|_| Error::parse(start, "bad integer"))?;
                Ok(Radical::from_rational(Rational::from_integer(n)))
            }
            Some(b's') if self.s[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                self.expect(b'(')?;
                let at = self.pos;
                let v = self.expr()?;
                self.expect(b')')?;
                if !v.radicand().is_one() && !v.is_zero() {
                    return Err(Error::parse(at, "nested radical"));
                }
                Radical::sqrt(v.coeff()).map_err(|_| Error::parse(at, "negative radicand"))
            }
            Some(_) => Err(Error::parse(self.pos, "unexpected character")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses one radical expression into canonical form.
pub fn parse_radical_expr(text: &str) -> Result<Radical> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        parse_radical_expr(s).unwrap().to_string()
    }

    #[test]
    fn grammar_forms() {
        assert_eq!(show("1/sqrt(5)"), "1/5*sqrt(5)");
        assert_eq!(show("-3/(2*sqrt(110))"), "-3/220*sqrt(110)");
        assert_eq!(show("sqrt(2/3)"), "1/3*sqrt(6)");
        assert_eq!(show("-sqrt(3/2)/2"), "-1/4*sqrt(6)");
        assert_eq!(show("151*sqrt(15/852734)/4"), parse_radical_expr("151/4*sqrt(15/852734)").unwrap().to_string());
        assert_eq!(show("0"), "0");
        assert_eq!(show(" 7 "), "7");
        assert_eq!(show("-38*sqrt(2/16711)"), "-38/16711*sqrt(33422)");
    }

    #[test]
    fn errors_carry_position() {
        match parse_radical_expr("1/sqrt(x)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_radical_expr("sqrt(-2)").is_err());
        assert!(parse_radical_expr("1/0").is_err());
        assert!(parse_radical_expr("2 3").is_err());
        assert!(parse_radical_expr("sqrt(sqrt(2))").is_err());
        assert!(parse_radical_expr("").is_err());
    }
}
