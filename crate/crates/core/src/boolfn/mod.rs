//! Exact analysis of Boolean combining functions.
//!
//! Variable convention used everywhere in the crate: input `x_i` is bit `i`
//! of the truth-table index (LSB first).

mod anf;
mod profile;
mod walsh;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use anf::{Anf, MAX_ANF_VARS};
pub use profile::{algebraic_immunity, profile, FunctionProfile};
pub use walsh::{mobius_transform, walsh_naive, walsh_transform};

use crate::error::{Error, Result};

/// Largest variable count for an explicit truth table.
pub const MAX_VARS: usize = 20;

/// A Boolean function of `n` variables stored as `2^n` packed output bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::TooManyVariables(n));
        }
        let words = (1usize << n).div_ceil(64);
        Ok(TruthTable { n, words: vec![0; words] })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut t = Self::zero(n)?;
        for x in 0..t.len() {
            if f(x) {
                t.set(x, true);
            }
        }
        Ok(t)
    }

    /// Builds a table from one bit per entry; `bits.len()` must be a power of two.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let len = bits.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "truth table length {len} is not a power of two"
            )));
        }
        Self::from_fn(len.trailing_zeros() as usize, |x| bits[x])
    }

    /// The linear function `x -> mask . x`.
    pub fn linear(mask: LinearMask) -> Result<Self> {
        Self::from_fn(mask.n, |x| mask.eval(x as u64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, v: bool) {
        let bit = 1u64 << (x & 63);
        if v {
            self.words[x >> 6] |= bit;
        } else {
            self.words[x >> 6] &= !bit;
        }
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn complement(&self) -> Self {
        let mut t = self.clone();
        for x in 0..t.len() {
            t.set(x, !self.get(x));
        }
        t
    }

    pub fn to_anf(&self) -> Anf {
        let coeffs = mobius_transform(self);
        let monos = (0..self.len()).filter(|&x| coeffs.get(x)).map(|x| x as u64);
        Anf::from_monomials(self.n, monos).expect("n <= 20")
    }

    pub fn algebraic_degree(&self) -> u32 {
        let coeffs = mobius_transform(self);
        (0..self.len())
            .filter(|&x| coeffs.get(x))
            .map(|x| x.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn walsh(&self) -> Vec<i32> {
        walsh_transform(self)
    }

    /// Bias of the approximation `f ~ mask . x`, computed from one Walsh sum.
    pub fn bias_at(&self, mask: LinearMask) -> Result<Bias> {
        if mask.n != self.n {
            return Err(Error::InvalidParameter(format!(
                "mask over {} variables applied to a function of {}",
                mask.n, self.n
            )));
        }
        let mut w: i64 = 0;
        for x in 0..self.len() {
            w += if self.get(x) ^ mask.eval(x as u64) { -1 } else { 1 };
        }
        Ok(Bias::from_walsh(w, self.n as u32))
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, ", self.n)?;
        if self.n <= 6 {
            for x in 0..self.len() {
                f.write_str(if self.get(x) { "1" } else { "0" })?;
            }
        } else {
            write!(f, "weight={}", self.weight())?;
        }
        f.write_str(")")
    }
}

/// Parses ANF text over `x_0 .. x_{n-1}` into a truth table.
pub fn parse_anf(text: &str, n: usize) -> Result<TruthTable> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    Anf::parse(text, n)?.to_truth_table()
}

/// The linear function `x -> a . x` over `n` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearMask {
    pub n: usize,
    pub mask: u64,
}

impl LinearMask {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        if n > MAX_ANF_VARS || (n < 64 && mask >> n != 0) {
            return Err(Error::InvalidParameter(format!(
                "mask {mask:#x} does not fit {n} variables"
            )));
        }
        Ok(LinearMask { n, mask })
    }

    pub fn from_vars(n: usize, vars: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vars {
            if v >= n {
                return Err(Error::VariableOutOfRange { index: v, n });
            }
            mask |= 1 << v;
        }
        Ok(LinearMask { n, mask })
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.mask >> i & 1 == 1).collect()
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        (self.mask & x).count_ones() & 1 == 1
    }
}

impl fmt::Display for LinearMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = vars.iter().map(|v| format!("x_{v}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Signed bias `epsilon` with `Pr[f = approximation] = (1 + epsilon) / 2`.
///
/// Biases coming from a Walsh coefficient are exact dyadic rationals and are
/// represented exactly by the `f64`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Bias {
    pub epsilon: f64,
}

impl Bias {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > -1.0 - f64::EPSILON && epsilon <= 1.0) || epsilon.is_nan() {
            return Err(Error::InvalidParameter(format!("bias {epsilon} outside [-1, 1]")));
        }
        Ok(Bias { epsilon })
    }

    /// `W / 2^n`.
    pub fn from_walsh(w: i64, n: u32) -> Self {
        Bias { epsilon: w as f64 / (n as f64).exp2() }
    }

    /// A bias of magnitude `2^log2_abs` with the given sign.
    pub fn from_log2(log2_abs: f64, negative: bool) -> Self {
        let e = log2_abs.exp2();
        Bias { epsilon: if negative { -e } else { e } }
    }

    pub fn is_zero(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn log2_abs(&self) -> f64 {
        self.epsilon.abs().log2()
    }

    /// `n_b = log2(1 / |epsilon|)`.
    pub fn n_b(&self) -> f64 {
        -self.log2_abs()
    }

    pub fn prob_agree(&self) -> f64 {
        (1.0 + self.epsilon) / 2.0
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.epsilon == 0.0 {
            return f.write_str("0");
        }
        let sign = if self.epsilon < 0.0 { "-" } else { "+" };
        write!(f, "{sign}2^{:.2}", self.log2_abs())
    }
}

/// One entry of [`best_affine_approximations`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximation {
    pub mask: LinearMask,
    pub walsh: i32,
    pub bias: Bias,
}

/// All linear approximations of weight at most `max_weight`, sorted by
/// decreasing `|bias|`, then increasing weight, then increasing mask.
pub fn best_affine_approximations(f: &TruthTable, max_weight: u32) -> Vec<Approximation> {
    let spectrum = walsh_transform(f);
    let n = f.n();
    let mut out: Vec<Approximation> = spectrum
        .iter()
        .enumerate()
        .filter(|(a, _)| (*a as u64).count_ones() <= max_weight)
        .map(|(a, &w)| Approximation {
            mask: LinearMask { n, mask: a as u64 },
            walsh: w,
            bias: Bias::from_walsh(w as i64, n as u32),
        })
        .collect();
    out.sort_by(|a, b| {
        b.walsh
            .abs()
            .cmp(&a.walsh.abs())
            .then(a.mask.weight().cmp(&b.mask.weight()))
            .then(a.mask.mask.cmp(&b.mask.mask))
    });
    out
}

/// Substitutes constants for some inputs; the remaining variables keep their
/// relative order and are renumbered from 0.
pub fn restrict(f: &TruthTable, fixed: &BTreeMap<usize, bool>) -> Result<TruthTable> {
    let n = f.n();
    let mut fixed_mask = 0usize;
    let mut fixed_vals = 0usize;
    for (&i, &v) in fixed {
        if i >= n {
            return Err(Error::InvalidRestriction(format!(
                "variable x_{i} out of range for {n} variables"
            )));
        }
        fixed_mask |= 1 << i;
        if v {
            fixed_vals |= 1 << i;
        }
    }
    let free: Vec<usize> = (0..n).filter(|i| fixed_mask >> i & 1 == 0).collect();
    TruthTable::from_fn(free.len(), |y| {
        let mut x = fixed_vals;
        for (j, &i) in free.iter().enumerate() {
            if y >> j & 1 == 1 {
                x |= 1 << i;
            }
        }
        f.get(x)
    })
}

/// Like [`restrict`] but takes a list of `(variable, value)` pairs and rejects
/// duplicates.
pub fn restrict_pairs(f: &TruthTable, fixed: &[(usize, bool)]) -> Result<TruthTable> {
    let mut map = BTreeMap::new();
    for &(i, v) in fixed {
        if map.insert(i, v).is_some() {
            return Err(Error::InvalidRestriction(format!("variable x_{i} fixed twice")));
        }
    }
    restrict(f, &map)
}
