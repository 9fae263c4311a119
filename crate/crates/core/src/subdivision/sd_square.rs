use std::fmt;

use crate::constructions::{check_cap, LABEL_LIMIT};
use crate::error::{Error, Result};
use crate::face::{binomial, combination_rank, combination_unrank, FaceWord};
use crate::square::{CellRef, SquareSet};
use crate::subdivision::delta::DeltaSet;

/// A cube of `Sd_□(X)`: a simplex `x ∈ X_{n-1}` and a back face map `λ : I^k -> I^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackFaceLabel {
    pub simplex: CellRef,
    pub back: FaceWord,
}

impl BackFaceLabel {
    pub fn new(simplex: CellRef, back: FaceWord) -> Result<BackFaceLabel> {
        if !back.is_back() || back.target_dim() != simplex.dim + 1 || back.source_dim() >= back.target_dim() {
            return Err(Error::Malformed(format!("{back} is not a proper back face into I^{}", simplex.dim + 1)));
        }
        Ok(BackFaceLabel { simplex, back })
    }
}

impl fmt::Display for BackFaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.simplex)?;
        for c in self.back.pattern() {
            match c {
                None => write!(f, "*")?,
                Some(e) => write!(f, "{e}")?,
            }
        }
        Ok(())
    }
}

/// `Sd_□(X)` with its cube catalog.
///
/// Cubes of dimension `k` are ordered by `n` (from `k + 1` up), then by the
/// simplex `x ∈ X_{n-1}`, then by the kept positions of `λ` in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct SdSquare {
    pub set: SquareSet,
    block_start: Vec<Vec<usize>>,
    simplex_counts: Vec<usize>,
}

/// Cube counts `Σ_{n>k} |X_{n-1}| C(n,k)` of `Sd_□(X)`.
pub fn estimate_sd_square(simplex_counts: &[usize]) -> Vec<u128> {
    let top = simplex_counts.len().saturating_sub(1);
    (0..=top)
        .map(|k| (k + 1..=top + 1).map(|n| simplex_counts[n - 1] as u128 * binomial(n as u64, k as u64)).sum())
        .collect()
}

/// `r(λ')^* x` for a front face map `λ'` into `I^n` and `x ∈ X_{n-1}`: deletes
/// the vertices `p - 1` for every inserted position `p`.
pub fn restrict_front(x: &DeltaSet, simplex: CellRef, front: &FaceWord) -> CellRef {
    let mut cur = simplex;
    for &(p, e) in front.insertions().iter().rev() {
        debug_assert_eq!(e, 0);
        cur = CellRef::new(cur.dim - 1, x.face(cur.dim, cur.index, p - 1));
    }
    cur
}

/// `μ^*(x, λ) = (r(λ')^* x, μ')` where `λ' μ'` is the front–back
/// decomposition of `λ μ`.
pub fn face_action(x: &DeltaSet, cube: &BackFaceLabel, mu: &FaceWord) -> Result<BackFaceLabel> {
    let composite = cube.back.compose(mu)?;
    let (front, back) = composite.front_back_decompose();
    BackFaceLabel::new(restrict_front(x, cube.simplex, &front), back)
}

/// The □-subdivision. Fails with [`Error::TooLarge`] above `cap` cubes.
pub fn sd_square(x: &DeltaSet, cap: u128) -> Result<SdSquare> {
    let top = x.max_dim();
    check_cap(&estimate_sd_square(x.cell_counts()), cap)?;
    let mut block_start = vec![vec![0usize; top + 2]; top + 1];
    let mut counts = vec![0usize; top + 1];
    for k in 0..=top {
        for n in k + 1..=top + 1 {
            block_start[k][n] = counts[k];
            counts[k] += x.cell_count(n - 1) * binomial(n as u64, k as u64) as usize;
        }
    }
    let index = |k: usize, n: usize, s: usize, r: usize| block_start[k][n] + s * binomial(n as u64, k as u64) as usize + r;
    let mut faces = vec![Vec::new()];
    for k in 1..=top {
        let mut table = vec![0u32; 2 * k * counts[k]];
        for n in k + 1..=top + 1 {
            let per = binomial(n as u64, k as u64) as usize;
            for r in 0..per {
                let kept = combination_unrank(n, k, r);
                for i in 1..=k {
                    let p = kept[i - 1];
                    let rest: Vec<usize> = kept.iter().copied().filter(|&q| q != p).collect();
                    let shifted: Vec<usize> = rest.iter().map(|&q| if q > p { q - 1 } else { q }).collect();
                    let r1 = combination_rank(n, &rest);
                    let r0 = combination_rank(n - 1, &shifted);
                    for s in 0..x.cell_count(n - 1) {
                        let row = 2 * k * index(k, n, s, r) + 2 * (i - 1);
                        let s0 = x.face(n - 1, s, p - 1);
                        table[row] = index(k - 1, n - 1, s0, r0) as u32;
                        table[row + 1] = index(k - 1, n, s, r1) as u32;
                    }
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
                for n in k + 1..=top + 1 {
                    let patterns: Vec<String> = (0..binomial(n as u64, k as u64) as usize)
                        .map(|r| {
                            let kept = combination_unrank(n, k, r);
                            (1..=n).map(|p| if kept.contains(&p) { '*' } else { '1' }).collect()
                        })
                        .collect();
                    for s in 0..x.cell_count(n - 1) {
                        let cell = CellRef::new(n - 1, s);
                        let name = x.label(cell).map_or_else(|| cell.to_string(), str::to_string);
                        for p in &patterns {
                            out.push(format!("{name}|{p}"));
                        }
                    }
                }
                out
            })
            .collect()
    });
    let set = SquareSet::new(counts, faces, labels, x.is_truncated())?;
    Ok(SdSquare { set, block_start, simplex_counts: x.cell_counts().to_vec() })
}

impl SdSquare {
    pub fn label(&self, k: usize, idx: usize) -> Option<BackFaceLabel> {
        let top = self.simplex_counts.len() - 1;
        if k > top || idx >= self.set.cell_count(k) {
            return None;
        }
        let n = (k + 1..=top + 1).find(|&n| {
            let start = self.block_start[k][n];
            idx >= start && idx < start + self.simplex_counts[n - 1] * binomial(n as u64, k as u64) as usize
        })?;
        let per = binomial(n as u64, k as u64) as usize;
        let off = idx - self.block_start[k][n];
        let kept = combination_unrank(n, k, off % per);
        let ins = (1..=n).filter(|p| !kept.contains(p)).map(|p| (p, 1)).collect();
        let back = FaceWord::new(k, n, ins).ok()?;
        Some(BackFaceLabel { simplex: CellRef::new(n - 1, off / per), back })
    }

    pub fn index_of(&self, label: &BackFaceLabel) -> Option<usize> {
        let (k, n) = (label.back.source_dim(), label.back.target_dim());
        if !label.back.is_back() || n == 0 || n > self.simplex_counts.len() || k >= n || label.simplex.dim != n - 1 {
            return None;
        }
        if label.simplex.index >= self.simplex_counts[n - 1] {
            return None;
        }
        let r = combination_rank(n, &label.back.kept_positions());
        Some(self.block_start[k][n] + label.simplex.index * binomial(n as u64, k as u64) as usize + r)
    }
}
