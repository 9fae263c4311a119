use std::collections::HashMap;
use std::fmt;

use crate::constructions::{check_cap, LABEL_LIMIT};
use crate::error::{Error, Result};
use crate::face::FaceWord;
use crate::square::{CellRef, SquareSet};
use crate::subdivision::delta::DeltaSet;

/// A strictly increasing chain of faces `F_0 ⊂ F_1 ⊂ ... ⊂ F_k = I^n`.
///
/// Stored per coordinate `p`: `levels[p]` is the least `j` with `p` free in
/// `F_j`, and `eps[p]` is the constant value of `p` in the faces where it is
/// not free (0 when `levels[p] = 0`). Every level `1..=k` is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    levels: Vec<u8>,
    eps: Vec<u8>,
}

impl Flag {
    pub fn new(levels: Vec<u8>, eps: Vec<u8>) -> Result<Flag> {
        if levels.len() != eps.len() {
            return Err(Error::Malformed("flag levels and constants differ in length".into()));
        }
        let k = levels.iter().copied().max().unwrap_or(0) as usize;
        let mut used = vec![false; k + 1];
        for (&l, &e) in levels.iter().zip(&eps) {
            used[l as usize] = true;
            if e > 1 || (l == 0 && e != 0) {
                return Err(Error::Malformed("flag constants must be 0 or 1, and 0 on free coordinates".into()));
            }
        }
        if used[1..].iter().any(|u| !u) {
            return Err(Error::Malformed("flag skips a level".into()));
        }
        Ok(Flag { levels, eps })
    }

    /// The one-element flag `I^n`.
    pub fn top(n: usize) -> Flag {
        Flag { levels: vec![0; n], eps: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn k(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    /// Dimension of `F_j`.
    pub fn dim_at(&self, j: usize) -> usize {
        self.levels.iter().filter(|&&l| l as usize <= j).count()
    }

    /// `F_j` as a pattern over `I^n`: `None` for free coordinates.
    pub fn pattern_at(&self, j: usize) -> Vec<Option<u8>> {
        self.levels.iter().zip(&self.eps).map(|(&l, &e)| if l as usize <= j { None } else { Some(e) }).collect()
    }

    /// `∂_i` of the simplex: the flag with `F_i` removed. For `i = k` the base
    /// cell moves to `F_{k-1}`; the returned insertions (sorted by position)
    /// describe that face of the base.
    pub fn face(&self, i: usize) -> (Flag, Vec<(usize, u8)>) {
        let k = self.k() as u8;
        let i = i as u8;
        assert!(k > 0 && i <= k, "no face ∂_{i} of a flag of length {k}");
        if i == k {
            let mut levels = Vec::new();
            let mut eps = Vec::new();
            let mut ins = Vec::new();
            for (p, (&l, &e)) in self.levels.iter().zip(&self.eps).enumerate() {
                if l == k {
                    ins.push((p + 1, e));
                } else {
                    levels.push(l);
                    eps.push(e);
                }
            }
            return (Flag { levels, eps }, ins);
        }
        let mut f = self.clone();
        for (l, e) in f.levels.iter_mut().zip(f.eps.iter_mut()) {
            if i == 0 {
                *l = l.saturating_sub(1);
                if *l == 0 {
                    *e = 0;
                }
            } else if *l > i {
                *l -= 1;
            }
        }
        (f, Vec::new())
    }

    /// The chain `λ_1, ..., λ_k` with `λ_j : I^{n_{j-1}} -> I^{n_j}`.
    pub fn chain(&self) -> Vec<FaceWord> {
        (1..=self.k())
            .map(|j| {
                let mut rank = 0;
                let mut ins = Vec::new();
                for (&l, &e) in self.levels.iter().zip(&self.eps) {
                    if l as usize <= j {
                        rank += 1;
                        if l as usize == j {
                            ins.push((rank, e));
                        }
                    }
                }
                FaceWord::new(self.dim_at(j - 1), self.dim_at(j), ins).expect("flag steps are face maps")
            })
            .collect()
    }

    /// Inverse of [`Flag::chain`] for composable face maps into `I^n` with
    /// strictly increasing dimensions.
    pub fn from_chain(n: usize, chain: &[FaceWord]) -> Result<Flag> {
        let mut target = n;
        for w in chain.iter().rev() {
            if w.target_dim() != target || w.source_dim() >= w.target_dim() {
                return Err(Error::Malformed("chain of face maps is not composable and strictly increasing".into()));
            }
            target = w.source_dim();
        }
        let mut levels = vec![0u8; n];
        let mut eps = vec![0u8; n];
        let mut free: Vec<usize> = (0..n).collect();
        for (j, w) in chain.iter().enumerate().rev() {
            let mut rest = Vec::new();
            let mut ins = w.insertions().iter().peekable();
            for (r, &p) in free.iter().enumerate() {
                match ins.peek() {
                    Some(&&(pos, e)) if pos == r + 1 => {
                        levels[p] = (j + 1) as u8;
                        eps[p] = e;
                        ins.next();
                    }
                    _ => rest.push(p),
                }
            }
            free = rest;
        }
        Flag::new(levels, eps)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..=self.k() {
            if j > 0 {
                write!(f, "<")?;
            }
            for c in self.pattern_at(j) {
                match c {
                    None => write!(f, "*")?,
                    Some(e) => write!(f, "{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// All flags of length `k` in `I^n`, ordered by level vector then constants.
pub fn enumerate_flags(n: usize, k: usize) -> Vec<Flag> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut levels = vec![0u8; n];
    loop {
        let mut used = vec![false; k + 1];
        for &l in &levels {
            used[l as usize] = true;
        }
        if used[1..].iter().all(|&u| u) {
            let slots: Vec<usize> = (0..n).filter(|&p| levels[p] > 0).collect();
            for bits in 0u32..(1u32 << slots.len()) {
                let mut eps = vec![0u8; n];
                for (t, &p) in slots.iter().enumerate() {
                    eps[p] = ((bits >> (slots.len() - 1 - t)) & 1) as u8;
                }
                out.push(Flag { levels: levels.clone(), eps });
            }
        }
        // odometer, last coordinate fastest
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if (levels[p] as usize) < k {
                levels[p] += 1;
                for l in &mut levels[p + 1..] {
                    *l = 0;
                }
                break;
            }
        }
    }
}

/// A simplex of `Sd_Δ(C)`: a base cell and the chain `λ_1, ..., λ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexLabel {
    pub base: CellRef,
    pub chain: Vec<FaceWord>,
}

impl fmt::Display for SimplexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for w in &self.chain {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

/// `Sd_Δ(C)` together with the catalogs needed to decode simplex indices.
///
/// Simplices of dimension `k` are ordered by base dimension `n`, then base
/// cell, then flag in the order of [`enumerate_flags`].
#[derive(Clone, Debug)]
pub struct SdDelta {
    pub set: DeltaSet,
    flags: Vec<Vec<Vec<Flag>>>,
    flag_index: Vec<Vec<HashMap<Flag, usize>>>,
    block_start: Vec<Vec<usize>>,
    base_counts: Vec<usize>,
}

/// Number of `k`-simplices over one `n`-cell: chains `n_0 < ... < n_k = n`
/// weighted by `Π C(n_j, n_{j-1}) 2^{n_j - n_{j-1}}`.
pub fn flags_over_cell(n: usize, k: usize) -> u128 {
    // ways[j][m]: chains of length j ending at dimension m
    let mut ways = vec![vec![0u128; n + 1]; k + 1];
    for m in 0..=n {
        ways[0][m] = 1;
    }
    for j in 1..=k {
        for m in 0..=n {
            ways[j][m] = (0..m).map(|p| ways[j - 1][p] * crate::face::count_face_maps(p, m).unwrap_or(0)).sum();
        }
    }
    ways[k][n]
}

/// Simplex counts of `Sd_Δ(C)` from the cell counts of `C`.
pub fn estimate_sd_delta(cell_counts: &[usize]) -> Vec<u128> {
    let top = cell_counts.len().saturating_sub(1);
    (0..=top)
        .map(|k| (k..=top).map(|n| cell_counts[n] as u128 * flags_over_cell(n, k)).sum())
        .collect()
}

/// The Δ-subdivision. Fails with [`Error::TooLarge`] above `cap` simplices.
pub fn sd_delta(c: &SquareSet, cap: u128) -> Result<SdDelta> {
    let top = c.max_dim();
    let estimate = estimate_sd_delta(c.cell_counts());
    check_cap(&estimate, cap)?;
    let flags: Vec<Vec<Vec<Flag>>> = (0..=top).map(|n| (0..=n).map(|k| enumerate_flags(n, k)).collect()).collect();
    let flag_index: Vec<Vec<HashMap<Flag, usize>>> = flags
        .iter()
        .map(|per_k| per_k.iter().map(|fs| fs.iter().cloned().enumerate().map(|(r, f)| (f, r)).collect()).collect())
        .collect();
    let mut block_start = vec![vec![0usize; top + 1]; top + 1];
    let mut counts = vec![0usize; top + 1];
    for k in 0..=top {
        for n in k..=top {
            block_start[k][n] = counts[k];
            counts[k] += c.cell_count(n) * flags[n][k].len();
        }
    }
    let index = |k: usize, n: usize, x: usize, r: usize| block_start[k][n] + x * flags[n][k].len() + r;
    let mut faces = vec![Vec::new()];
    for k in 1..=top {
        let mut table = vec![0u32; (k + 1) * counts[k]];
        for n in k..=top {
            // face data per flag: same-base ranks for i < k, then the base move for i = k
            let plan: Vec<(Vec<usize>, usize, Vec<(usize, u8)>, usize)> = flags[n][k]
                .iter()
                .map(|f| {
                    let same: Vec<usize> = (0..k).map(|i| flag_index[n][k - 1][&f.face(i).0]).collect();
                    let (g, ins) = f.face(k);
                    let n2 = g.n();
                    (same, n2, ins, flag_index[n2][k - 1][&g])
                })
                .collect();
            for x in 0..c.cell_count(n) {
                for (r, (same, n2, ins, r2)) in plan.iter().enumerate() {
                    let row = (k + 1) * index(k, n, x, r);
                    for (i, &s) in same.iter().enumerate() {
                        table[row + i] = index(k - 1, n, x, s) as u32;
                    }
                    let x2 = c.apply_insertions(n, x, ins);
                    table[row + k] = index(k - 1, *n2, x2, *r2) as u32;
                }
            }
        }
        faces.push(table);
    }
    let total: u128 = counts.iter().map(|&v| v as u128).sum();
    let labels = (total <= LABEL_LIMIT).then(|| {
        (0..=top)
            .map(|k| {
                let mut out = Vec::with_capacity(counts[k]);
                for n in k..=top {
                    for x in 0..c.cell_count(n) {
                        let base = CellRef::new(n, x);
                        let name = c.label(base).map_or_else(|| base.to_string(), str::to_string);
                        for f in &flags[n][k] {
                            out.push(format!("{name}:{f}"));
                        }
                    }
                }
                out
            })
            .collect()
    });
    let set = DeltaSet::new(counts, faces, labels, c.is_truncated())?;
    Ok(SdDelta { set, flags, flag_index, block_start, base_counts: c.cell_counts().to_vec() })
}

impl SdDelta {
    /// Base cell and flag of a simplex.
    pub fn decode(&self, k: usize, idx: usize) -> Option<(CellRef, &Flag)> {
        let top = self.base_counts.len() - 1;
        if k > top || idx >= self.set.cell_count(k) {
            return None;
        }
        let n = (k..=top).find(|&n| {
            let start = self.block_start[k][n];
            idx >= start && idx < start + self.base_counts[n] * self.flags[n][k].len()
        })?;
        let off = idx - self.block_start[k][n];
        let per = self.flags[n][k].len();
        Some((CellRef::new(n, off / per), &self.flags[n][k][off % per]))
    }

    pub fn label(&self, k: usize, idx: usize) -> Option<SimplexLabel> {
        self.decode(k, idx).map(|(base, f)| SimplexLabel { base, chain: f.chain() })
    }

    pub fn index_of(&self, label: &SimplexLabel) -> Option<usize> {
        let n = label.base.dim;
        if n >= self.base_counts.len() || label.base.index >= self.base_counts[n] {
            return None;
        }
        let f = Flag::from_chain(n, &label.chain).ok()?;
        let k = f.k();
        let r = *self.flag_index[n][k].get(&f)?;
        Some(self.block_start[k][n] + label.base.index * self.flags[n][k].len() + r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cube_set, rack_space, trivial_set, Rack, DEFAULT_CELL_CAP};

    #[test]
    fn interval_and_square_counts() {
        let s = sd_delta(&cube_set(1), DEFAULT_CELL_CAP).unwrap();
        assert_eq!(s.set.cell_counts(), &[3, 2]);
        let t = sd_delta(&trivial_set(2), DEFAULT_CELL_CAP).unwrap();
        assert_eq!(t.set.cell_counts(), &[3, 10, 8]);
        assert_eq!(t.set.euler_characteristic(), 1);
    }

    /// Surjection count `Σ_s C(n,s) 2^s Surj(s,k)` as a second formula.
    fn flags_by_surjections(n: usize, k: usize) -> u128 {
        fn surj(s: usize, k: usize) -> i128 {
            (0..=k)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * crate::face::binomial(k as u64, j as u64) as i128 * ((k - j) as i128).pow(s as u32)
                })
                .sum()
        }
        (0..=n).map(|s| crate::face::binomial(n as u64, s as u64) as i128 * (1i128 << s) * surj(s, k)).sum::<i128>() as u128
    }

    #[test]
    fn flag_counts() {
        for n in 0..=6 {
            for k in 0..=n {
                assert_eq!(enumerate_flags(n, k).len() as u128, flags_over_cell(n, k));
                assert_eq!(flags_over_cell(n, k), flags_by_surjections(n, k));
            }
        }
        let mut sorted = enumerate_flags(3, 2);
        sorted.sort();
        assert_eq!(enumerate_flags(3, 2), sorted);
    }

    #[test]
    fn chain_round_trip() {
        for n in 0..=4 {
            for k in 0..=n {
                for f in enumerate_flags(n, k) {
                    let chain = f.chain();
                    assert_eq!(chain.len(), k);
                    assert_eq!(Flag::from_chain(n, &chain).unwrap(), f);
                }
            }
        }
    }

    /// Faces from the chain formulas: drop `λ_1`, compose `λ_{i+1} λ_i`, or
    /// move the base along `λ_k`.
    fn chain_face(c: &SquareSet, l: &SimplexLabel, i: usize) -> SimplexLabel {
        let k = l.chain.len();
        if i == 0 {
            SimplexLabel { base: l.base, chain: l.chain[1..].to_vec() }
        } else if i < k {
            let mut chain = l.chain[..i - 1].to_vec();
            chain.push(l.chain[i].compose(&l.chain[i - 1]).unwrap());
            chain.extend_from_slice(&l.chain[i + 1..]);
            SimplexLabel { base: l.base, chain }
        } else {
            let base = c.apply_face_word(l.base, &l.chain[k - 1]).unwrap();
            SimplexLabel { base, chain: l.chain[..k - 1].to_vec() }
        }
    }

    #[test]
    fn faces_follow_chain_formulas() {
        let inputs = [cube_set(3), trivial_set(4), rack_space(&Rack::cyclic(3).unwrap(), 3, DEFAULT_CELL_CAP).unwrap()];
        for c in &inputs {
            let s = sd_delta(c, DEFAULT_CELL_CAP).unwrap();
            assert!(s.set.validate().is_empty());
            assert_eq!(s.set.euler_characteristic(), c.euler_characteristic());
            let est = estimate_sd_delta(c.cell_counts());
            assert_eq!(s.set.cell_counts().iter().map(|&v| v as u128).collect::<Vec<_>>(), est);
            for k in 1..=s.set.max_dim() {
                for x in 0..s.set.cell_count(k) {
                    let l = s.label(k, x).unwrap();
                    assert_eq!(s.index_of(&l), Some(x));
                    for i in 0..=k {
                        let expected = chain_face(c, &l, i);
                        assert_eq!(s.label(k - 1, s.set.face(k, x, i)).unwrap(), expected, "k={k} x={x} i={i}");
                    }
                }
            }
        }
    }
}
