//! Algebraic normal form: parsing, printing and evaluation.
//!
//! Accepted syntax is an XOR (`+`) of monomials. A monomial is a product of
//! variables written `x_i`, `x_{i}` or `xi`, joined by juxtaposition or `*`.
//! The constants `1` and `0` may appear as terms or factors. Whitespace is
//! ignored, and so are the `$` and trailing `.` of a formula pasted from TeX.

use std::fmt;

use super::{mobius_transform, TruthTable, MAX_VARS};
use crate::error::{Error, Result};

/// Largest variable count an ANF may range over (register cells are `u64`).
pub const MAX_ANF_VARS: usize = 64;

/// A Boolean polynomial as a set of monomials; monomial `m` is the product of
/// the variables whose bits are set in `m`, and `m = 0` is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Anf {
    n: usize,
    monomials: Vec<u64>,
}

impl Anf {
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n > MAX_ANF_VARS {
            return Err(Error::TooManyVariables(n));
        }
        Parser { src: text.as_bytes(), pos: 0, n }.expression()
    }

    pub fn from_monomials(n: usize, monomials: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_ANF_VARS {
            return Err(Error::TooManyVariables(n));
        }
        let mut list: Vec<u64> = Vec::new();
        for m in monomials {
            if n < 64 && m >> n != 0 {
                return Err(Error::VariableOutOfRange {
                    index: 63 - m.leading_zeros() as usize,
                    n,
                });
            }
            list.push(m);
        }
        Ok(Self::normalized(n, list))
    }

    /// Sorts and cancels repeated monomials (x + x = 0).
    fn normalized(n: usize, mut list: Vec<u64>) -> Self {
        list.sort_unstable();
        let mut out: Vec<u64> = Vec::with_capacity(list.len());
        for m in list {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        Anf { n, monomials: out }
    }

    pub fn zero(n: usize) -> Self {
        Anf { n, monomials: Vec::new() }
    }

    pub fn var(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::VariableOutOfRange { index, n });
        }
        Ok(Anf { n, monomials: vec![1u64 << index] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &[u64] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Evaluates at the point whose variable `i` is bit `i` of `x`.
    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        self.monomials
            .iter()
            .fold(false, |acc, &m| acc ^ (x & m == m))
    }

    /// Bit mask of the variables that occur in some monomial.
    pub fn support(&self) -> u64 {
        self.monomials.iter().fold(0, |acc, m| acc | m)
    }

    pub fn to_truth_table(&self) -> Result<TruthTable> {
        if self.n > MAX_VARS {
            return Err(Error::TooManyVariables(self.n));
        }
        let mut coeffs = TruthTable::zero(self.n)?;
        for &m in &self.monomials {
            coeffs.set(m as usize, true);
        }
        Ok(mobius_transform(&coeffs))
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (k, &m) in self.monomials.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m == 0 {
                f.write_str("1")?;
                continue;
            }
            let mut bits = m;
            while bits != 0 {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                if i < 10 {
                    write!(f, "x_{i}")?;
                } else {
                    write!(f, "x_{{{i}}}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::AnfParse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() || c == b'$' || c == b'\\' && self.src.get(self.pos + 1) == Some(&b'\\') {
                self.pos += if c == b'\\' { 2 } else { 1 };
            } else if c == b'.' && self.src[self.pos + 1..].iter().all(|b| b.is_ascii_whitespace() || *b == b'$') {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expression(mut self) -> Result<Anf> {
        let mut terms = Vec::new();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        loop {
            if let Some(m) = self.term()? {
                terms.push(m);
            }
            match self.peek() {
                None => break,
                Some(b'+') => self.pos += 1,
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(Anf::normalized(self.n, terms))
    }

    /// Returns `None` for a product containing the constant 0.
    fn term(&mut self) -> Result<Option<u64>> {
        let mut mono = 0u64;
        let mut zero = false;
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(b'x') | Some(b'X') => {
                    self.pos += 1;
                    let idx = self.index()?;
                    if idx >= self.n {
                        return Err(Error::VariableOutOfRange { index: idx, n: self.n });
                    }
                    mono |= 1u64 << idx;
                }
                Some(b'1') => self.pos += 1,
                Some(b'0') => {
                    self.pos += 1;
                    zero = true;
                }
                Some(b'*') if factors > 0 => {
                    self.pos += 1;
                    continue;
                }
                _ => break,
            }
            factors += 1;
        }
        if factors == 0 {
            return self.err("expected a variable or constant");
        }
        Ok(if zero { None } else { Some(mono) })
    }

    fn index(&mut self) -> Result<usize> {
        let mut braced = false;
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'{') {
            self.pos += 1;
            braced = true;
        }
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected variable index");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let idx = match digits.parse::<usize>() {
            Ok(v) => v,
            Err(_) => return self.err("variable index too large"),
        };
        if braced {
            if self.src.get(self.pos) != Some(&b'}') {
                return self.err("missing '}'");
            }
            self.pos += 1;
        }
        Ok(idx)
    }
}
