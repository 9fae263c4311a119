use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::face::{binomial, combinations};

/// A split of `{1, ..., m+n}` into an `n`-element subset `H` and its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShufflePartition {
    pub total: usize,
    pub subset: Vec<usize>,
    pub complement: Vec<usize>,
}

impl ShufflePartition {
    pub fn new(total: usize, subset: Vec<usize>) -> ShufflePartition {
        let complement = (1..=total).filter(|p| !subset.contains(p)).collect();
        ShufflePartition { total, subset, complement }
    }

    /// Sign of the permutation moving `H` to the front, keeping the order
    /// inside `H` and inside its complement.
    pub fn sign(&self) -> i64 {
        shuffle_sign(&self.subset)
    }
}

/// `(-1)^(number of pairs (h, k) with h ∈ H, k ∉ H, k < h)`.
pub fn shuffle_sign(subset: &[usize]) -> i64 {
    let inversions: usize = subset.iter().enumerate().map(|(idx, &h)| h - 1 - idx).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `n`-element subsets of `{1, ..., m+n}` with their complements.
pub fn shuffles(m: usize, n: usize) -> Vec<ShufflePartition> {
    combinations(m + n, n).into_iter().map(|h| ShufflePartition::new(m + n, h)).collect()
}

/// `φ_{m,n} = Σ_H s(H)` by direct summation.
pub fn phi_brute(m: usize, n: usize) -> BigInt {
    shuffles(m, n).iter().map(|s| BigInt::from(s.sign())).sum()
}

/// Closed form: `C(⌊(m+n)/2⌋, ⌊n/2⌋)` when `mn` is even, else 0.
pub fn phi_closed(m: usize, n: usize) -> BigInt {
    if (m * n) % 2 == 1 {
        BigInt::zero()
    } else {
        BigInt::from(binomial(((m + n) / 2) as u64, (n / 2) as u64))
    }
}

/// The table `φ_{m,n}` for `0 <= m, n <= max` filled by the recurrence
/// `φ_{m,n} = φ_{m,n-1} + (-1)^n φ_{m-1,n}` from `φ_{0,n} = φ_{m,0} = 1`.
pub fn phi_recurrence_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); max + 1]; max + 1];
    for m in 0..=max {
        for n in 0..=max {
            t[m][n] = if m == 0 || n == 0 {
                BigInt::one()
            } else if n % 2 == 0 {
                &t[m][n - 1] + &t[m - 1][n]
            } else {
                &t[m][n - 1] - &t[m - 1][n]
            };
        }
    }
    t
}
