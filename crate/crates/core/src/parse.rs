//! Text syntax for bundle expressions.
//!
//! ```text
//! sum     := tensor ('+' tensor)*
//! tensor  := postfix ('*' postfix)*
//! postfix := primary ( "'" | '(' int ')' )*
//! primary := 'U' | 'Q' | 'O' [ '(' int ')' ]
//!          | 'sym2(' sum ')' | 'wedge2(' sum ')'
//!          | 'schur(' '[' int (',' int)* ']' ',' ('U' | 'Q') ')'
//!          | '(' sum ')'
//! ```
//!
//! Whitespace is insignificant. `'` is the dual and a trailing `(n)` twists by `O(n)`.

use crate::error::{Error, Result};
use crate::expr::{BundleExpr, Generator};
use crate::rep::GlWeight;

pub fn parse(text: &str) -> Result<BundleExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
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
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.src.len() >= end && &self.src[self.pos..end] == kw.as_bytes() {
            let next_is_ident = self.src.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if !next_is_ident || kw.len() == 1 {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("expected integer")
        })
    }

    /// Lookahead for `( int )` without consuming anything else.
    fn twist_ahead(&mut self) -> bool {
        let save = self.pos;
        let ok = self.eat(b'(') && self.int().is_ok() && self.eat(b')');
        self.pos = save;
        ok
    }

    fn sum(&mut self) -> Result<BundleExpr> {
        let mut e = self.tensor()?;
        while self.eat(b'+') {
            e = e.sum(self.tensor()?);
        }
        Ok(e)
    }

    fn tensor(&mut self) -> Result<BundleExpr> {
        let mut e = self.postfix()?;
        while self.eat(b'*') {
            e = e.tensor(self.postfix()?);
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<BundleExpr> {
        let mut e = self.primary()?;
        loop {
            if self.eat(b'\'') {
                e = e.dual();
            } else if self.peek() == Some(b'(') && self.twist_ahead() {
                self.expect(b'(')?;
                let t = self.int()?;
                self.expect(b')')?;
                e = e.twist(t);
            } else {
                return Ok(e);
            }
        }
    }

    fn schur_power(&mut self, wedge: bool) -> Result<BundleExpr> {
        self.expect(b'(')?;
        let start = self.pos;
        let inner = self.sum()?;
        let end = self.pos;
        self.expect(b')')?;
        let rank = inner.rank();
        if rank > 3 {
            return Err(Error::UnsupportedSchurPower { rank, span: Some((start, end)) });
        }
        Ok(if wedge { inner.wedge2() } else { inner.sym2() })
    }

    fn primary(&mut self) -> Result<BundleExpr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(_) => {
                if self.keyword("sym2") {
                    self.schur_power(false)
                } else if self.keyword("wedge2") {
                    self.schur_power(true)
                } else if self.keyword("schur") {
                    self.expect(b'(')?;
                    self.expect(b'[')?;
                    let mut entries = vec![self.int()?];
                    while self.eat(b',') {
                        entries.push(self.int()?);
                    }
                    self.expect(b']')?;
                    self.expect(b',')?;
                    let g = if self.keyword("U") {
                        Generator::U
                    } else if self.keyword("Q") {
                        Generator::Q
                    } else {
                        return Err(self.err("expected generator U or Q"));
                    };
                    if entries.len() != g.rank() {
                        return Err(self.err("weight length must match the generator rank"));
                    }
                    let w = GlWeight::new(entries).ok_or_else(|| self.err("weight must be non-increasing"))?;
                    self.expect(b')')?;
                    Ok(BundleExpr::Schur(w, g))
                } else if self.keyword("U") {
                    Ok(BundleExpr::u())
                } else if self.keyword("Q") {
                    Ok(BundleExpr::q())
                } else if self.keyword("O") {
                    if self.peek() == Some(b'(') && self.twist_ahead() {
                        self.expect(b'(')?;
                        let t = self.int()?;
                        self.expect(b')')?;
                        Ok(BundleExpr::o(t))
                    } else {
                        Ok(BundleExpr::o(0))
                    }
                } else {
                    Err(self.err("expected U, Q, O, sym2, wedge2, schur or '('"))
                }
            }
        }
    }
}
