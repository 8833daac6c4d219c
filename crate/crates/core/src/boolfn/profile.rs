use serde::{Deserialize, Serialize};

use super::{walsh_transform, TruthTable};

/// The cryptographic property list of a combining function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionProfile {
    pub n: usize,
    pub balanced: bool,
    pub algebraic_degree: u32,
    /// Largest `m` such that the function is balanced and `W(a) = 0` for all
    /// `1 <= wt(a) <= m`; `-1` when unbalanced.
    pub resiliency_order: i32,
    pub nonlinearity: u64,
    pub algebraic_immunity: u32,
}

impl FunctionProfile {
    /// `deg + m <= n - 1` for an `m`-resilient function with `1 <= m <= n - 2`;
    /// an `(n-1)`-resilient function is affine.
    pub fn satisfies_siegenthaler(&self) -> bool {
        let (m, n) = (self.resiliency_order as i64, self.n as i64);
        if m < 1 {
            true
        } else if m >= n - 1 {
            self.algebraic_degree == 1
        } else {
            self.algebraic_degree as i64 + m < n
        }
    }

    /// Covering-radius bound `NL <= 2^(n-1) - 2^(n/2 - 1)`, checked for even `n`.
    pub fn satisfies_nonlinearity_bound(&self) -> bool {
        if self.n % 2 == 1 || self.n == 0 {
            return true;
        }
        self.nonlinearity <= (1u64 << (self.n - 1)) - (1u64 << (self.n / 2 - 1))
    }
}

pub fn profile(f: &TruthTable) -> FunctionProfile {
    let w = walsh_transform(f);
    let n = f.n();
    let balanced = w[0] == 0;
    let resiliency_order = if !balanced {
        -1
    } else {
        w.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &v)| v != 0)
            .map(|(a, _)| a.count_ones() as i32 - 1)
            .min()
            .unwrap_or(n as i32)
    };
    let max_abs = w.iter().map(|v| v.unsigned_abs() as u64).max().unwrap_or(0);
    let nonlinearity = (f.len() as u64 / 2).saturating_sub(max_abs / 2);
    let p = FunctionProfile {
        n,
        balanced,
        algebraic_degree: f.algebraic_degree(),
        resiliency_order,
        nonlinearity,
        algebraic_immunity: algebraic_immunity(f),
    };
    debug_assert!(p.satisfies_siegenthaler(), "Siegenthaler bound violated: {p:?}");
    p
}

/// Minimum degree of a nonzero annihilator of `f` or `f + 1`.
///
/// For each candidate degree `d` the monomials of degree `<= d` are evaluated
/// on the support of the function; an annihilator of degree `<= d` exists iff
/// that evaluation matrix has a nontrivial kernel (rank below the column
/// count).
pub fn algebraic_immunity(f: &TruthTable) -> u32 {
    let n = f.n();
    let ones: Vec<usize> = (0..f.len()).filter(|&x| f.get(x)).collect();
    let zeros: Vec<usize> = (0..f.len()).filter(|&x| !f.get(x)).collect();
    let mut by_degree: Vec<usize> = (0..f.len()).collect();
    by_degree.sort_by_key(|m| (m.count_ones(), *m));
    for d in 0..=n as u32 {
        let cols = by_degree.partition_point(|m| m.count_ones() <= d);
        let monos = &by_degree[..cols];
        if has_annihilator(&ones, monos) || has_annihilator(&zeros, monos) {
            return d;
        }
    }
    n as u32
}

/// True iff some nonzero combination of `monos` vanishes on every point.
fn has_annihilator(points: &[usize], monos: &[usize]) -> bool {
    let cols = monos.len();
    if points.len() < cols {
        return true;
    }
    let words = cols.div_ceil(64);
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    let mut row = vec![0u64; words];
    for &x in points {
        row.iter_mut().for_each(|w| *w = 0);
        for (c, &m) in monos.iter().enumerate() {
            if x & m == m {
                row[c >> 6] |= 1 << (c & 63);
            }
        }
        while let Some(c) = lowest_bit(&row) {
            match &pivots[c] {
                Some(p) => row.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots[c] = Some(row.clone());
                    rank += 1;
                    break;
                }
            }
        }
        if rank == cols {
            return false;
        }
    }
    true
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
