use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::chain::{Ring, SparseMatrix};

/// Invariant factors `d_1 | d_2 | ...` of a matrix and its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors other than 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
    units: BTreeSet<(usize, usize)>,
}

impl Work {
    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        let unit = v.abs().is_one();
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
            self.units.remove(&(r, c));
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
            if unit {
                self.units.insert((r, c));
            } else {
                self.units.remove(&(r, c));
            }
        }
    }

    /// Smallest magnitude entry, ties by lowest row then column.
    fn pivot(&self) -> Option<(usize, usize)> {
        if let Some(&p) = self.units.iter().next() {
            return Some(p);
        }
        let mut best: Option<(BigInt, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                    best = Some((a, r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }
}

/// Exact Smith normal form over the integers with arbitrary-precision
/// entries. Deterministic: the pivot is always the smallest nonzero entry.
pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let mut w = Work {
        rows: vec![BTreeMap::new(); m.rows()],
        cols: vec![BTreeSet::new(); m.cols()],
        units: BTreeSet::new(),
    };
    for (r, c, v) in m.triplets() {
        w.set(r, c, BigInt::from(v));
    }
    let mut diag = Vec::new();
    while let Some((r, c)) = w.pivot() {
        let p = w.rows[r][&c].clone();
        // clear column c with row operations
        let mut remainder = false;
        let others: Vec<usize> = w.cols[c].iter().copied().filter(|&r2| r2 != r).collect();
        let pivot_row: Vec<(usize, BigInt)> = w.rows[r].iter().map(|(&k, v)| (k, v.clone())).collect();
        for r2 in others {
            let a = w.rows[r2][&c].clone();
            let q = &a / &p;
            if q.is_zero() {
                remainder = true;
                continue;
            }
            for (k, v) in &pivot_row {
                let cur = w.rows[r2].get(k).cloned().unwrap_or_default();
                w.set(r2, *k, cur - &q * v);
            }
            if w.rows[r2].contains_key(&c) {
                remainder = true;
            }
        }
        if remainder {
            continue;
        }
        // column c now holds only the pivot; clear row r with column operations
        let row_rest: Vec<(usize, BigInt)> =
            w.rows[r].iter().filter(|(&k, _)| k != c).map(|(&k, v)| (k, v.clone())).collect();
        for (k, b) in row_rest {
            let rem = &b - (&b / &p) * &p;
            w.set(r, k, rem.clone());
            if !rem.is_zero() {
                remainder = true;
            }
        }
        if remainder {
            continue;
        }
        w.set(r, c, BigInt::zero());
        diag.push(p.abs());
    }
    let rank = diag.len();
    SmithForm { invariants: normalize_divisibility(diag), rank }
}

/// Rewrites a list of nonzero diagonal entries into a divisibility chain
/// with the same product structure.
pub fn normalize_divisibility(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let ones = d.iter().filter(|x| x.is_one()).count();
    d.retain(|x| !x.is_one());
    d.sort();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); ones];
    out.extend(d);
    out
}

/// Rank over `Z/2`.
pub fn rank_mod2(m: &SparseMatrix) -> usize {
    let mut pivot_of: Vec<Option<Vec<u32>>> = vec![None; m.rows()];
    let mut rank = 0;
    for c in 0..m.cols() {
        let (rows, vals) = m.column(c);
        let mut col: Vec<u32> =
            rows.iter().zip(vals).filter(|(_, &v)| v.rem_euclid(2) == 1).map(|(&r, _)| r).collect();
        while let Some(&low) = col.last() {
            match &pivot_of[low as usize] {
                Some(p) => col = xor_sorted(&col, p),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_of[low as usize] = Some(col);
            rank += 1;
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Smith form in the given ring; over `Z/2` every invariant factor is 1.
pub fn smith_in(m: &SparseMatrix, ring: Ring) -> SmithForm {
    match ring {
        Ring::Z => smith_normal_form(m),
        Ring::Z2 => {
            let rank = rank_mod2(m);
            SmithForm { invariants: vec![BigInt::one(); rank], rank }
        }
    }
}
