use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent tuple `(s_1, ..., s_r)` with every `s_i >= 1` and `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument("a composition needs at least one exponent".into()));
        }
        if let Some(i) = exponents.iter().position(|&s| s == 0) {
            return Err(Error::InvalidArgument(format!("exponent {} is zero", i + 1)));
        }
        Ok(Self(exponents))
    }

    /// `{value}^len`.
    pub fn repeated(value: u32, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    /// `(first, tail...)`.
    pub fn with_first(first: u32, tail: &[u32]) -> Result<Self> {
        let mut v = Vec::with_capacity(tail.len() + 1);
        v.push(first);
        v.extend_from_slice(tail);
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// The length `l(s) = r`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The weight `|s| = Σ s_i`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&s| s as u64).sum()
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    /// `(s_2, ..., s_r)`.
    pub fn tail(&self) -> &[u32] {
        &self.0[1..]
    }

    pub fn max_exponent(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    /// Runs of three or more equal exponents written as `{a}^k`.
    pub fn to_compact_string(&self) -> String {
        compact(&self.0)
    }
}

pub(crate) fn compact(exps: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < exps.len() {
        let mut j = i;
        while j < exps.len() && exps[j] == exps[i] {
            j += 1;
        }
        let run = j - i;
        if run >= 3 {
            parts.push(format!("{{{}}}^{}", exps[i], run));
        } else {
            parts.extend(std::iter::repeat_n(exps[i].to_string(), run));
        }
        i = j;
    }
    parts.join(",")
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact_string())
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_composition(s)
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::CompositionSyntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
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
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let v = digits.parse::<u32>().map_err(|_| Error::CompositionSyntax {
            offset: start,
            message: format!("integer {digits} is too large"),
        })?;
        Ok((start, v))
    }

    fn item(&mut self, out: &mut Vec<u32>) -> Result<()> {
        if self.eat(b'{') {
            let (at, value) = self.int()?;
            if value == 0 {
                return Err(Error::CompositionSyntax {
                    offset: at,
                    message: "exponents must be positive".into(),
                });
            }
            self.expect(b'}')?;
            self.expect(b'^')?;
            let (at, reps) = self.int()?;
            if reps == 0 {
                return Err(Error::CompositionSyntax {
                    offset: at,
                    message: "repetition count must be positive".into(),
                });
            }
            out.extend(std::iter::repeat_n(value, reps as usize));
        } else {
            let (at, value) = self.int()?;
            if value == 0 {
                return Err(Error::CompositionSyntax {
                    offset: at,
                    message: "exponents must be positive".into(),
                });
            }
            out.push(value);
        }
        Ok(())
    }
}

/// Parses `item (',' item)*` where `item := INT | '{' INT '}' '^' INT`,
/// optionally wrapped in parentheses. `{a}^k` expands to `k` copies of `a`.
pub fn parse_composition(text: &str) -> Result<Composition> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let parens = p.eat(b'(');
    let mut out = Vec::new();
    p.item(&mut out)?;
    while p.eat(b',') {
        p.item(&mut out)?;
    }
    if parens {
        p.expect(b')')?;
    }
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Composition::new(out)
}
