// Recursive descent over the grammar
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' uint)?
//   base   := int | ident | '(' expr ')'
// A leading sign is accepted so that printed polynomials parse back.

use num_bigint::BigInt;

use super::{Monomial, PolyRing, Polynomial, MAX_EXPONENT};
use crate::error::{Error, Result};

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(super) fn parse(ring: &PolyRing, text: &str) -> Result<Polynomial> {
    let mut p = Parser { ring, src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.try_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: u32 = match digits.parse::<u64>() {
            Ok(e) if e <= MAX_EXPONENT as u64 => e as u32,
            _ => return Err(Error::ExponentOverflow),
        };
        base.try_pow(e)
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(self.ring.constant(&n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Ok(i) = self.ring.variable_index(name) {
                    return Ok(self.ring.term(&BigInt::from(1), Monomial::variable(self.ring.nvars(), i)));
                }
                let cr = self.ring.coefficients();
                if cr.generator_symbol() == Some(name) {
                    let field = cr.galois_field().unwrap();
                    let g = field.encode(&field.generator());
                    return Ok(self.ring.from_terms([(Monomial::one(self.ring.nvars()), g)]));
                }
                Err(Error::UnknownVariable(name.to_string()))
            }
            Some(_) => Err(self.error("expected an integer, a variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::CoefficientRing;

    fn zz(vars: &[&str]) -> PolyRing {
        PolyRing::grevlex(CoefficientRing::integers(), vars).unwrap()
    }

    #[test]
    fn errors_carry_positions() {
        let r = zz(&["x", "y"]);
        assert_eq!(
            r.parse("x + * y"),
            Err(Error::Syntax { position: 4, message: "expected an integer, a variable or `(`".into() })
        );
        assert_eq!(r.parse("2x"), Err(Error::Syntax { position: 1, message: "unexpected trailing input".into() }));
        assert_eq!(r.parse("x + w"), Err(Error::UnknownVariable("w".into())));
        assert_eq!(r.parse("x^70000"), Err(Error::ExponentOverflow));
        assert_eq!(r.parse("x^40000 * x^40000"), Err(Error::ExponentOverflow));
        assert!(matches!(r.parse("(x + y"), Err(Error::Syntax { position: 6, .. })));
    }

    #[test]
    fn field_generator_symbol() {
        let cr = CoefficientRing::finite_field(2, 2).unwrap();
        let r = PolyRing::grevlex(cr, &["x"]).unwrap();
        // a^2 + a + 1 = 0 in F_4
        assert!(r.parse("a^2 + a + 1").unwrap().is_zero());
        let f = r.parse("a*x + (a + 1)").unwrap();
        assert_eq!(r.parse(&f.to_string()).unwrap(), f);
    }
}
