//! Recursive-descent parser for germ equations.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)*
//! atom   := uint ('/' uint)? | 'x' | 't' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{BiPoly, PolyError};
use crate::exact::Rational;

pub fn parse_poly(text: &str) -> Result<BiPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<BiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BiPoly, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly, PolyError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let at = {
                self.skip_ws();
                self.pos
            };
            let exp = match self.peek() {
                Some(c) if c.is_ascii_digit() => self.uint()?,
                _ => return Err(PolyError::BadExponent { pos: at }),
            };
            if self.peek() == Some(b'/') {
                return Err(PolyError::BadExponent { pos: at });
            }
            let exp = exp.to_u32().ok_or(PolyError::BadExponent { pos: at })?;
            base = base.pow(exp);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if c.is_ascii_digit() => self.uint()?,
                        _ => return Err(self.syntax("expected denominator after '/'")),
                    }
                } else {
                    BigInt::from(1)
                };
                if den.is_zero() {
                    return Err(self.syntax("zero denominator"));
                }
                Ok(BiPoly::constant(Rational::from_bigints(num, den)))
            }
            Some(b'x') | Some(b't') if !self.ident_continues() => {
                let c = self.src[self.pos];
                self.pos += 1;
                Ok(if c == b'x' { BiPoly::x() } else { BiPoly::t() })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Err(PolyError::UnknownVariable {
                    pos: start,
                    name: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.syntax(format!("unexpected {:?}", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    /// `x`/`t` followed by more identifier characters is some other name.
    fn ident_continues(&self) -> bool {
        self.src
            .get(self.pos + 1)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits
            .parse::<BigInt>()
            .map_err(|_| self.syntax("expected integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_examples() {
        let f = parse_poly("t - x^5 - x^9").unwrap();
        assert_eq!(
            f,
            BiPoly::from_terms([((0, 1), q(1, 1)), ((5, 0), q(-1, 1)), ((9, 0), q(-1, 1))])
        );
        let g = parse_poly("(t-1)*(t-2)").unwrap();
        assert_eq!(
            g,
            BiPoly::from_terms([((0, 2), q(1, 1)), ((0, 1), q(-3, 1)), ((0, 0), q(2, 1))])
        );
    }

    #[test]
    fn rational_literals_and_precedence() {
        let f = parse_poly("2/9*x^2 - -x*t + (x+t)^2").unwrap();
        let expected =
            BiPoly::from_terms([((2, 0), q(11, 9)), ((1, 1), q(3, 1)), ((0, 2), q(1, 1))]);
        assert_eq!(f, expected);
        assert_eq!(
            parse_poly("-x^2").unwrap(),
            BiPoly::monomial(q(-1, 1), 2, 0)
        );
        assert_eq!(parse_poly("x^0").unwrap(), BiPoly::one());
        assert_eq!(parse_poly("x - x").unwrap(), BiPoly::zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            parse_poly("t*y^9"),
            Err(PolyError::UnknownVariable {
                pos: 2,
                name: "y".into()
            })
        );
        assert!(matches!(
            parse_poly("tx"),
            Err(PolyError::UnknownVariable { .. })
        ));
        assert_eq!(parse_poly("x^-2"), Err(PolyError::BadExponent { pos: 2 }));
        assert_eq!(parse_poly("x^1/2"), Err(PolyError::BadExponent { pos: 2 }));
        assert!(matches!(
            parse_poly("x^t"),
            Err(PolyError::BadExponent { .. })
        ));
        assert!(matches!(
            parse_poly("(x + t"),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_poly("x + "), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0"), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse_poly("2 x"),
            Err(PolyError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly(""),
            Err(PolyError::Syntax { pos: 0, .. })
        ));
    }
}
