//! Integer bound expressions such as `N-1`, `N/2` or `2*M+3`.
//!
//! Grammar: sums and differences of products and floor quotients of integer
//! literals, the variables `N` and `M` (where `M = N/2`), and parentheses.

use divcorr_core::{Error, Result};

pub fn eval(src: &str, n: i64) -> Result<i64> {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { toks: &toks, pos: 0, n };
    let v = p.sum()?;
    if p.pos != toks.len() {
        return Err(bad(src));
    }
    Ok(v)
}

fn bad(src: &str) -> Error {
    Error::InvalidArgument(format!("cannot parse bound expression '{src}'"))
}

fn overflow() -> Error {
    Error::Overflow("bound expression".into())
}

struct Parser<'a> {
    toks: &'a [char],
    pos: usize,
    n: i64,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn err(&self) -> Error {
        bad(&self.toks.iter().collect::<String>())
    }

    fn sum(&mut self) -> Result<i64> {
        let mut v = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let r = self.product()?;
            v = if c == '+' { v.checked_add(r) } else { v.checked_sub(r) }.ok_or_else(overflow)?;
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<i64> {
        let mut v = self.atom()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let r = self.atom()?;
            v = if c == '*' {
                v.checked_mul(r).ok_or_else(overflow)?
            } else {
                if r == 0 {
                    return Err(self.err());
                }
                v.div_euclid(r)
            };
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<i64> {
        match self.peek() {
            Some('N') => {
                self.pos += 1;
                Ok(self.n)
            }
            Some('M') => {
                self.pos += 1;
                Ok(self.n / 2)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    self.pos += 1;
                }
                let s: String = self.toks[start..self.pos].iter().filter(|&&c| c != '_').collect();
                let mut v: i64 = s.parse().map_err(|_| self.err())?;
                // scientific shorthand: 1e6
                if self.peek() == Some('e') {
                    self.pos += 1;
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let e: u32 = self.toks[start..self.pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| self.err())?;
                    v = 10i64
                        .checked_pow(e)
                        .and_then(|p| v.checked_mul(p))
                        .ok_or_else(overflow)?;
                }
                Ok(v)
            }
            _ => Err(self.err()),
        }
    }
}
