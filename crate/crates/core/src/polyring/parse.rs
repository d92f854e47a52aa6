//! Parser for polynomial text.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := atom ("^" INT)?
//! atom   := NUMBER | VAR | "(" expr ")" | "-" factor
//! VAR    := "x" INT | "z" INT | "i"
//!         | "A[" INT "," INT "," INT "]" | ("a"|"b") "[" INT "," INT "]"
//! NUMBER := digits ["." digits]
//! ```
//!
//! Division is only allowed by nonzero constants. Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::{EntryMatrix, Poly, VarId};
use crate::error::{Error, Result};
use crate::exactlinalg::Rat;

pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::syntax(p.pos, "unexpected trailing input"));
    }
    Ok(out)
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.factor()?;
                let c = d.constant_term();
                if d.num_terms() > 1 || (!d.is_zero() && d.total_degree() != Some(0)) {
                    return Err(Error::syntax(at, "division by a non-constant"));
                }
                if c.is_zero() {
                    return Err(Error::syntax(at, "division by zero"));
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| Error::syntax(self.pos, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(b'x') => {
                self.pos += 1;
                let k = self.index()?;
                Ok(Poly::var(VarId::Param(k)))
            }
            Some(b'z') => {
                self.pos += 1;
                let k = self.uint_u32()?;
                Ok(Poly::var(VarId::Aux(k)))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Poly::var(VarId::Imag))
            }
            Some(b'A') => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.index()?;
                self.expect(b',')?;
                let t = self.index()?;
                self.expect(b',')?;
                let q = self.index()?;
                self.expect(b']')?;
                Ok(Poly::var(VarId::edge(i as usize, t as usize, q as usize)))
            }
            Some(c @ (b'a' | b'b')) => {
                self.pos += 1;
                let mat = if c == b'a' {
                    EntryMatrix::A
                } else {
                    EntryMatrix::B
                };
                self.expect(b'[')?;
                let row = self.index()?;
                self.expect(b',')?;
                let col = self.index()?;
                self.expect(b']')?;
                Ok(Poly::var(VarId::Entry { mat, row, col }))
            }
            Some(c) => Err(Error::syntax(
                start,
                format!("unexpected character '{}'", c as char),
            )),
            None => Err(Error::syntax(start, "unexpected end of input")),
        }
    }

    fn digits(&mut self) -> &[u8] {
        let s = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[s..self.pos]
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let at = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(Error::syntax(at, "expected an integer"));
        }
        std::str::from_utf8(d)
            .unwrap()
            .parse()
            .map_err(|_| Error::syntax(at, "integer too large"))
    }

    fn uint_u32(&mut self) -> Result<u32> {
        let at = self.pos;
        u32::try_from(self.uint()?).map_err(|_| Error::syntax(at, "integer too large"))
    }

    /// A 1-based index.
    fn index(&mut self) -> Result<u32> {
        let at = self.pos;
        let k = self.uint_u32()?;
        if k == 0 {
            return Err(Error::syntax(at, "indices start at 1"));
        }
        Ok(k)
    }

    fn number(&mut self) -> Result<Poly> {
        let int = std::str::from_utf8(self.digits()).unwrap().to_owned();
        let mut value = Rat::from_integer(int.parse::<BigInt>().unwrap());
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac = std::str::from_utf8(self.digits()).unwrap().to_owned();
            if !frac.is_empty() {
                let scale = BigInt::from(10).pow(frac.len() as u32);
                value += Rat::new(frac.parse::<BigInt>().unwrap(), scale);
            }
        }
        Ok(Poly::constant(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{rat, ratio};

    #[test]
    fn parses_basic_forms() {
        let x1 = Poly::var(VarId::param(1));
        let x2 = Poly::var(VarId::param(2));
        assert_eq!(parse_poly("x1").unwrap(), x1);
        assert_eq!(parse_poly("-x2").unwrap(), -&x2);
        assert_eq!(
            parse_poly("x1^2 - 2*x1*x2 + x2^2").unwrap(),
            (&x1 - &x2).pow(2)
        );
        assert_eq!(
            parse_poly("(x1 + 1)/2").unwrap(),
            (&x1 + &Poly::one()).scale(&ratio(1, 2))
        );
        assert_eq!(parse_poly("0.25").unwrap(), Poly::constant(ratio(1, 4)));
        assert_eq!(parse_poly("  3 ").unwrap(), Poly::constant(rat(3)));
        assert_eq!(
            parse_poly("A[1,2,1]*a[2,1] + b[1,1]").unwrap().vars().len(),
            3
        );
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            parse_poly("x0"),
            Err(Error::syntax(1, "indices start at 1"))
        );
        assert!(matches!(
            parse_poly("x1 +"),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("x1 / x2"),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_poly("x1 )"),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_poly("y"), Err(Error::Syntax { pos: 0, .. })));
    }
}
