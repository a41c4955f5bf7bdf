//! Text grammar for trace polynomials.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' UINT)?
//! atom    := 'X' UINT | 'tr' '(' expr ')' | 'ntr' '(' expr ')' | COMPLEX | '(' expr ')'
//! COMPLEX := FLOAT | FLOAT? 'i'
//! ```
//!
//! A parenthesized complex literal such as `(2-3i)` is read through the
//! `'(' expr ')'` branch. Whitespace is insignificant; positions in errors
//! are byte offsets into the input.

use num_complex::Complex64;

use super::poly::TracePoly;
use crate::error::{Error, Result};

/// Largest accepted exponent in `p^k`.
pub const MAX_EXPONENT: u32 = 64;

/// Parses and fully expands `text` over `d` generators.
pub fn parse_expression(text: &str, d: usize) -> Result<TracePoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        d,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    d: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            message: message.into(),
        }
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
            Err(match self.peek() {
                Some(got) => self.error(format!("expected '{}', found '{}'", c as char, got as char)),
                None => self.error(format!("expected '{}', found end of input", c as char)),
            })
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<TracePoly> {
        let negate_first = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate_first { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TracePoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TracePoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.uint()?;
            if e > MAX_EXPONENT as u64 {
                return Err(Error::Syntax {
                    pos: at,
                    message: format!("exponent {e} exceeds {MAX_EXPONENT}"),
                });
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                message: "integer out of range".into(),
            })
    }

    fn atom(&mut self) -> Result<TracePoly> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'X' => {
                let start = self.pos;
                self.pos += 1;
                let idx = self.uint()?;
                if idx == 0 || idx > self.d as u64 {
                    return Err(Error::GeneratorOutOfRange {
                        index: idx,
                        d: self.d,
                        pos: start,
                    });
                }
                TracePoly::var(self.d, idx as u32)
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            b'n' if self.keyword("ntr") => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner.normalized_trace())
            }
            b't' if self.keyword("tr") => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner.trace())
            }
            b'i' => {
                self.pos += 1;
                Ok(TracePoly::scalar(self.d, Complex64::new(0.0, 1.0)))
            }
            b'0'..=b'9' | b'.' => {
                let v = self.float()?;
                if self.eat(b'i') {
                    Ok(TracePoly::scalar(self.d, Complex64::new(0.0, v)))
                } else {
                    Ok(TracePoly::scalar(self.d, Complex64::new(v, 0.0)))
                }
            }
            other => Err(self.error(format!("unexpected '{}'", other as char))),
        }
    }

    fn float(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text.parse().map_err(|_| Error::Syntax {
            pos: start,
            message: format!("malformed number '{text}'"),
        })?;
        if !v.is_finite() {
            return Err(Error::Syntax {
                pos: start,
                message: format!("number '{text}' is not finite"),
            });
        }
        Ok(v)
    }
}
