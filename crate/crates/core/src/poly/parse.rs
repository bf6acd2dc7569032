//! Text format for polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := '-'? INT ('^' exp)? | '(' exp ')'
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! `^` binds tightest and associates to the right; exponents are integer
//! literals, so they are never reduced in the coefficient ring.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{Poly, PolyRing};
use super::ratfunc::RatFunc;
use crate::arith::Ring;
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a, C: Ring> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a Arc<PolyRing<C>>,
    constants: &'a [(String, C)],
}

impl<'a, C: Ring> Parser<'a, C> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RatFunc<C>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc<C>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| ParseError::DivisionByZero { offset: at })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc<C>, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc<C>, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let e = self.exponent()?;
        let e: i32 = e.try_into().map_err(|_| ParseError::Syntax {
            offset: at,
            message: "exponent too large".into(),
        })?;
        base.pow(e).map_err(|_| ParseError::DivisionByZero { offset: at })
    }

    fn exponent(&mut self) -> Result<BigInt, ParseError> {
        match self.bump() {
            Tok::Minus => Ok(-self.exponent()?),
            Tok::Int(n) => {
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let at = self.offset();
                    let e = self.exponent()?;
                    let e: u32 = e.try_into().map_err(|_| ParseError::Syntax {
                        offset: at,
                        message: "exponent out of range".into(),
                    })?;
                    Ok(num_traits::Pow::pow(n, e))
                } else {
                    Ok(n)
                }
            }
            Tok::LParen => {
                let e = self.exponent()?;
                if self.bump() != Tok::RParen {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.err("expected integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<RatFunc<C>, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(RatFunc::constant(self.ring, C::from_bigint(self.ring.ctx(), &n))),
            Tok::Ident(name) => {
                if let Some(i) = self.ring.var_index(&name) {
                    Ok(RatFunc::var(self.ring, i))
                } else if let Some((_, c)) = self.constants.iter().find(|(n, _)| *n == name) {
                    Ok(RatFunc::constant(self.ring, c.clone()))
                } else {
                    Err(ParseError::UnknownVariable { name, offset: at })
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => {
                self.pos = self.toks.len() - 1;
                self.err("unexpected end of input")
            }
            t => {
                self.pos -= 1;
                self.err(format!("unexpected token {t:?}"))
            }
        }
    }
}

/// Parses a rational function. Identifiers resolve first to ring
/// variables, then to the named constants.
pub fn parse_ratfunc<C: Ring>(
    text: &str,
    ring: &Arc<PolyRing<C>>,
    constants: &[(String, C)],
) -> Result<RatFunc<C>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        constants,
    };
    let r = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parses a polynomial; a denominator is only allowed if it is a unit
/// constant.
pub fn parse_poly<C: Ring>(
    text: &str,
    ring: &Arc<PolyRing<C>>,
    constants: &[(String, C)],
) -> Result<Poly<C>, ParseError> {
    let r = parse_ratfunc(text, ring, constants)?;
    r.to_poly().ok_or_else(|| ParseError::NotPolynomial(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{DvrDescriptor, DvrElem, Rational};

    fn qring(vars: &[&str]) -> Arc<PolyRing<Rational>> {
        PolyRing::new(vars, ())
    }

    #[test]
    fn named_constant() {
        let d = DvrDescriptor::integers(5).unwrap();
        let r: Arc<PolyRing<DvrElem>> = PolyRing::new(&["x", "y"], d);
        let consts = vec![("p".to_string(), DvrElem::uniformizer(d))];
        let f = parse_poly("y^2 - x^3 - p^2", &r, &consts).unwrap();
        assert_eq!(f.to_string(), "-x^3 + y^2 - 25");
    }

    #[test]
    fn chord_slope() {
        let r = qring(&["x1", "y1", "x2", "y2"]);
        let l = parse_ratfunc("(y2-y1)/(x2-x1)", &r, &[]).unwrap();
        assert_eq!(l.numerator().to_string(), "y1 - y2");
        assert_eq!(l.denominator().to_string(), "x1 - x2");
    }

    #[test]
    fn syntax_error_offset() {
        let r = qring(&["x"]);
        match parse_ratfunc("x +", &r, &[]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ratfunc("x + z", &r, &[]),
            Err(ParseError::UnknownVariable { offset: 4, .. })
        ));
        assert!(matches!(parse_ratfunc("x $", &r, &[]), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn precedence() {
        let r = qring(&["x"]);
        let a = parse_poly("-x^2", &r, &[]).unwrap();
        assert_eq!(a.to_string(), "-x^2");
        let b = parse_poly("2^3^2", &r, &[]).unwrap();
        assert_eq!(b.to_string(), "512");
        let c = parse_ratfunc("x^-1", &r, &[]).unwrap();
        assert_eq!(c.to_string(), "(1)/(x)");
        let d = parse_poly("1/2*x", &r, &[]).unwrap();
        assert_eq!(d.to_string(), "1/2*x");
    }

    #[test]
    fn polynomial_required() {
        let r = qring(&["x"]);
        assert!(matches!(parse_poly("1/x", &r, &[]), Err(ParseError::NotPolynomial(_))));
        assert!(matches!(parse_ratfunc("1/(x-x)", &r, &[]), Err(ParseError::DivisionByZero { .. })));
    }
}
