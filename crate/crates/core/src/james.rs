//! James complexes `J^n(C)`: projections, their pullbacks along face maps,
//! blocks, sections, embedding heights and the word map `g_n`.

use std::sync::Arc;

use serde::Serialize;

use crate::constructions::LABEL_LIMIT;
use crate::error::{Error, Result};
use crate::face::{binomial, combination_rank, combination_unrank, combinations, Coord, FaceWord};
use crate::square::{CellRef, SquareMap, SquareSet};

/// A coordinate projection `I^{n+k} → I^k` that deletes the `n` collapsed
/// directions and keeps the others in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Projection {
    total_dim: usize,
    kept: Vec<usize>,
    collapsed: Vec<usize>,
}

impl Projection {
    /// From the collapsed directions (1-based, strictly increasing).
    pub fn new(total_dim: usize, collapsed: Vec<usize>) -> Result<Projection> {
        if collapsed.windows(2).any(|w| w[0] >= w[1]) || collapsed.iter().any(|&c| c == 0 || c > total_dim) {
            return Err(Error::Malformed(format!(
                "collapsed directions {collapsed:?} are not increasing within 1..={total_dim}"
            )));
        }
        let kept = (1..=total_dim).filter(|d| !collapsed.contains(d)).collect();
        Ok(Projection { total_dim, kept, collapsed })
    }

    /// The identity projection of `I^k`.
    pub fn identity(k: usize) -> Projection {
        Projection { total_dim: k, kept: (1..=k).collect(), collapsed: Vec::new() }
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Number of collapsed directions.
    pub fn n(&self) -> usize {
        self.collapsed.len()
    }

    /// Dimension of the image cube.
    pub fn k(&self) -> usize {
        self.kept.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn collapsed(&self) -> &[usize] {
        &self.collapsed
    }

    /// 0-based position in [`enumerate_projections`] order.
    pub fn lex_rank(&self) -> usize {
        combination_rank(self.total_dim, &self.collapsed)
    }

    /// Inverse of [`Projection::lex_rank`].
    pub fn from_rank(n: usize, k: usize, rank: usize) -> Projection {
        let collapsed = combination_unrank(n + k, n, rank);
        Projection::new(n + k, collapsed).expect("unranked subsets are increasing")
    }

    /// Applies the projection to a symbolic point of `I^{n+k}`.
    pub fn apply(&self, point: &[Coord]) -> Result<Vec<Coord>> {
        if point.len() != self.total_dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} fed to a projection from I^{}",
                point.len(),
                self.total_dim
            )));
        }
        Ok(self.kept.iter().map(|&d| point[d - 1]).collect())
    }
}

impl std::fmt::Display for Projection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.collapsed.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All of `P_k^{n+k}`, ordered lexicographically by collapsed directions.
pub fn enumerate_projections(n: usize, k: usize) -> Vec<Projection> {
    combinations(n + k, n)
        .into_iter()
        .map(|c| Projection::new(n + k, c).expect("combinations are increasing"))
        .collect()
}

/// Completes `μ: I^l → I^k` and `λ ∈ P_k^{n+k}` to a commuting square
/// `λ ∘ μ_λ = μ ∘ μ^♯(λ)`. Returns `(μ^♯(λ), μ_λ)`.
pub fn pullback_face(mu: &FaceWord, lambda: &Projection) -> Result<(Projection, FaceWord)> {
    if mu.target_dim() != lambda.k() {
        return Err(Error::DimensionMismatch(format!(
            "face map into I^{} against a projection onto I^{}",
            mu.target_dim(),
            lambda.k()
        )));
    }
    let inserted: Vec<(usize, u8)> = mu.insertions().iter().map(|&(q, e)| (lambda.kept[q - 1], e)).collect();
    let n = lambda.n();
    let mu_lambda = FaceWord::new(n + mu.source_dim(), lambda.total_dim, inserted.clone())?;
    let collapsed = lambda
        .collapsed
        .iter()
        .map(|&c| c - inserted.iter().filter(|&&(p, _)| p < c).count())
        .collect();
    let sharp = Projection::new(n + mu.source_dim(), collapsed)?;
    Ok((sharp, mu_lambda))
}

/// A cell `c_λ` of a James complex: a base cell and a projection of its cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JamesCellLabel {
    pub base: CellRef,
    pub projection: Projection,
}

/// `J^n(C)` with its cell decoding. Cells of dimension `k` are indexed
/// `x · C(n+k, k) + rank(λ)` for `x ∈ C_{n+k}`.
#[derive(Clone, Debug)]
pub struct JamesComplex {
    pub set: SquareSet,
    n: usize,
}

impl JamesComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of projections over each base cell of dimension `n + k`.
    pub fn block_size(&self, k: usize) -> usize {
        binomial((self.n + k) as u64, k as u64) as usize
    }

    pub fn label(&self, k: usize, index: usize) -> JamesCellLabel {
        let b = self.block_size(k);
        JamesCellLabel {
            base: CellRef::new(self.n + k, index / b),
            projection: Projection::from_rank(self.n, k, index % b),
        }
    }

    pub fn index_of(&self, label: &JamesCellLabel) -> usize {
        let k = label.base.dim - self.n;
        label.base.index * self.block_size(k) + label.projection.lex_rank()
    }
}

/// Cell counts of `J^n(C)` without building it.
pub fn estimate_james(c: &SquareSet, n: usize) -> Vec<u128> {
    if n > c.max_dim() {
        return Vec::new();
    }
    (0..=c.max_dim() - n)
        .map(|k| c.cell_count(n + k) as u128 * binomial((n + k) as u64, k as u64))
        .collect()
}

/// The James complex `J^n(C)`, truncated at `max_dim(C) - n`.
pub fn james_complex(c: &SquareSet, n: usize) -> Result<JamesComplex> {
    if n > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() });
    }
    let top = c.max_dim() - n;
    let counts: Vec<usize> = estimate_james(c, n).into_iter().map(|m| m as usize).collect();
    let mut faces = vec![Vec::new()];
    for k in 1..=top {
        let projections = enumerate_projections(n, k);
        // faces of every (x, λ) depend on λ only through (i_i, rank of μ^♯(λ))
        let mut plan = Vec::with_capacity(projections.len() * 2 * k);
        for lambda in &projections {
            for i in 1..=k {
                for eps in 0..2u8 {
                    let mu = FaceWord::first_order(k, i, eps)?;
                    let (sharp, mu_lambda) = pullback_face(&mu, lambda)?;
                    plan.push((mu_lambda.insertions().to_vec(), sharp.lex_rank()));
                }
            }
        }
        let b = projections.len();
        let b_lower = binomial((n + k - 1) as u64, (k - 1) as u64) as usize;
        let mut table = Vec::with_capacity(2 * k * counts[k]);
        for x in 0..c.cell_count(n + k) {
            for (ins, rank) in &plan {
                let y = c.apply_insertions(n + k, x, ins);
                table.push((y * b_lower + rank) as u32);
            }
        }
        debug_assert_eq!(table.len(), 2 * k * b * c.cell_count(n + k));
        faces.push(table);
    }
    let set = SquareSet::new(counts, faces, None, c.is_truncated())?;
    let mut j = JamesComplex { set, n };
    if j.set.total_cells() as u128 <= LABEL_LIMIT {
        let labels = (0..=top)
            .map(|k| {
                (0..j.set.cell_count(k))
                    .map(|idx| {
                        let l = j.label(k, idx);
                        let base = c.label(l.base).map(str::to_string).unwrap_or_else(|| l.base.to_string());
                        format!("{base}_{}", l.projection)
                    })
                    .collect()
            })
            .collect();
        j.set.set_labels(Some(labels))?;
    }
    Ok(j)
}

/// The `C(n+k, k)` cells of `J^n(C)` over a cell of dimension `n + k`.
pub fn block(c: &SquareSet, n: usize, cell: CellRef) -> Result<Vec<JamesCellLabel>> {
    c.check_cell(cell)?;
    if cell.dim < n {
        return Err(Error::DimensionMismatch(format!("cell of dimension {} below n = {n}", cell.dim)));
    }
    Ok(enumerate_projections(n, cell.dim - n)
        .into_iter()
        .map(|projection| JamesCellLabel { base: cell, projection })
        .collect())
}

/// The section `s_λ`: a symbolic point of `I^k` placed in `I^{n+k}` with
/// `1/2` in the collapsed directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionPoint(pub Vec<Coord>);

impl SectionPoint {
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

pub fn section_point(lambda: &Projection, x: &[Coord]) -> Result<SectionPoint> {
    if x.len() != lambda.k() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} for a section of I^{}",
            x.len(),
            lambda.k()
        )));
    }
    let mut out = vec![Coord::Half; lambda.total_dim];
    for (q, &d) in lambda.kept.iter().enumerate() {
        out[d - 1] = x[q];
    }
    Ok(SectionPoint(out))
}

/// Embedding height of a block: its 1-based lexicographic rank, or 0 when `n = 0`.
pub fn height(lambda: &Projection) -> usize {
    if lambda.n() == 0 {
        0
    } else {
        lambda.lex_rank() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingEntry {
    pub collapsed: Vec<usize>,
    pub height: usize,
    pub center: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCell {
    pub dim: usize,
    pub index: usize,
    pub blocks: Vec<EmbeddingEntry>,
}

/// Centers and heights of all blocks of `J^n(C)`, per base cell.
pub fn embed_blocks(c: &SquareSet, n: usize) -> Vec<EmbeddingCell> {
    let mut out = Vec::new();
    for d in n..=c.max_dim() {
        let k = d - n;
        let entries: Vec<EmbeddingEntry> = enumerate_projections(n, k)
            .iter()
            .map(|lambda| EmbeddingEntry {
                collapsed: lambda.collapsed.clone(),
                height: height(lambda),
                center: section_point(lambda, &crate::face::variables(k)).expect("k coordinates").to_strings(),
            })
            .collect();
        for index in 0..c.cell_count(d) {
            out.push(EmbeddingCell { dim: d, index, blocks: entries.clone() });
        }
    }
    out
}

/// A breach of the face-height law in `J^1(C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightViolation {
    pub k: usize,
    pub cell: usize,
    pub i: usize,
    pub eps: u8,
    pub expected: usize,
    pub found: usize,
}

/// Checks, on `J^1(C)` cells of dimension `< max_k`, that `c_(k)` has
/// height `k` and `∂_i^ε c_(k)` has height `k` if `i ≥ k`, else `k - 1`.
pub fn check_face_heights(j: &JamesComplex, max_k: usize) -> Vec<HeightViolation> {
    let mut out = Vec::new();
    if j.n() != 1 {
        return out;
    }
    for k in 1..=j.set.max_dim().min(max_k) {
        for x in 0..j.set.cell_count(k) {
            let l = j.label(k, x);
            let h = height(&l.projection);
            let col = l.projection.collapsed()[0];
            if h != col {
                out.push(HeightViolation { k, cell: x, i: 0, eps: 0, expected: col, found: h });
            }
            for i in 1..=k {
                for eps in 0..2 {
                    let f = j.label(k - 1, j.set.face(k, x, i, eps));
                    let expected = if i >= h { h } else { h - 1 };
                    let found = height(&f.projection);
                    if found != expected {
                        out.push(HeightViolation { k, cell: x, i, eps, expected, found });
                    }
                }
            }
        }
    }
    out
}

/// The □-map `J^n(f)`: `(x, λ) ↦ (f(x), λ)`.
pub fn induced_james_map(f: &SquareMap, n: usize) -> Result<SquareMap> {
    let report = f.validate();
    if !report.is_empty() {
        return Err(Error::InvalidMap(format!("{} violated relations", report.len())));
    }
    let js = james_complex(f.source(), n)?;
    let jt = james_complex(f.target(), n)?;
    let levels = (0..=js.set.max_dim())
        .map(|k| {
            let b = js.block_size(k);
            (0..js.set.cell_count(k))
                .map(|idx| (f.apply(n + k, idx / b) * b + idx % b) as u32)
                .collect()
        })
        .collect();
    SquareMap::new(Arc::new(js.set), Arc::new(jt.set), levels)
}

/// `g_n`: drops basepoint letters (0), then lists `(w_{λ_1}, ..., w_{λ_n})`
/// over all strictly increasing `λ` in lexicographic order.
pub fn james_hopf_word(word: &[usize], n: usize) -> Vec<Vec<usize>> {
    let reduced: Vec<usize> = word.iter().copied().filter(|&l| l != 0).collect();
    combinations(reduced.len(), n)
        .into_iter()
        .map(|c| c.iter().map(|&p| reduced[p - 1]).collect())
        .collect()
}
