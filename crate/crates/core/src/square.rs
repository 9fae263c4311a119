//! Finite truncated □-sets, □-maps and their validation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::FaceWord;

/// A cell of a graded set: dimension plus dense index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub dim: usize,
    pub index: usize,
}

impl CellRef {
    pub fn new(dim: usize, index: usize) -> Self {
        CellRef { dim, index }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}[{}]", self.dim, self.index)
    }
}

/// A finite □-set truncated at `max_dim`.
///
/// Cells are dense indices per dimension. The face table of dimension `n`
/// stores, for each cell `x`, the `2n` values `∂_i^ε x` at offset
/// `2(i - 1) + ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSet {
    max_dim: usize,
    cell_counts: Vec<usize>,
    faces: Vec<Vec<u32>>,
    labels: Option<Vec<Vec<String>>>,
    truncated: bool,
}

/// One broken axiom, with the witness needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `∂^η_{j-1} ∂^ε_i x != ∂^ε_i ∂^η_j x`.
    FaceRelation { n: usize, i: usize, j: usize, eps: u8, eta: u8, cell: usize, lhs: usize, rhs: usize },
    /// A face table entry that does not index a cell of the lower dimension.
    IndexOutOfRange { n: usize, i: usize, eps: u8, cell: usize, value: usize, bound: usize },
    /// A Δ-set face table entry that does not index a simplex of the lower dimension.
    DeltaIndexOutOfRange { k: usize, i: usize, cell: usize, value: usize, bound: usize },
    /// `∂_i ∂_j x != ∂_{j-1} ∂_i x` in a Δ-set.
    DeltaRelation { k: usize, i: usize, j: usize, cell: usize, lhs: usize, rhs: usize },
    /// `f_{n-1} ∂^ε_i x != ∂^ε_i f_n x`.
    MapNotCommuting { n: usize, i: usize, eps: u8, cell: usize, lhs: usize, rhs: usize },
    /// A level function value outside the target.
    MapOutOfRange { n: usize, cell: usize, value: usize, bound: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::FaceRelation { n, i, j, eps, eta, cell, lhs, rhs } => write!(
                f,
                "face relation fails at n={n} i={i} j={j} eps={eps} eta={eta} x={cell}: {lhs} != {rhs}"
            ),
            Violation::IndexOutOfRange { n, i, eps, cell, value, bound } => write!(
                f,
                "face ∂_{i}^{eps} of cell {cell} in dim {n} is {value}, out of range (< {bound})"
            ),
            Violation::DeltaIndexOutOfRange { k, i, cell, value, bound } => {
                write!(f, "face ∂_{i} of simplex {cell} in dim {k} is {value}, out of range (< {bound})")
            }
            Violation::DeltaRelation { k, i, j, cell, lhs, rhs } => {
                write!(f, "Δ relation fails at k={k} i={i} j={j} x={cell}: {lhs} != {rhs}")
            }
            Violation::MapNotCommuting { n, i, eps, cell, lhs, rhs } => write!(
                f,
                "map does not commute with ∂_{i}^{eps} at cell {cell} of dim {n}: {lhs} != {rhs}"
            ),
            Violation::MapOutOfRange { n, cell, value, bound } => {
                write!(f, "map sends cell {cell} of dim {n} to {value}, out of range (< {bound})")
            }
        }
    }
}

/// Result of a validation pass. Empty means every axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl SquareSet {
    /// Builds a □-set from per-dimension face tables (`faces[n]` for
    /// `n >= 1`; `faces[0]` must be empty). Checks shapes and index ranges but
    /// not the face relations; use [`SquareSet::validate`] for those.
    pub fn new(
        cell_counts: Vec<usize>,
        faces: Vec<Vec<u32>>,
        labels: Option<Vec<Vec<String>>>,
        truncated: bool,
    ) -> Result<Self> {
        let set = Self::from_raw_parts(cell_counts, faces, labels, truncated)?;
        for n in 1..=set.max_dim {
            let bound = set.cell_counts[n - 1];
            if let Some(pos) = set.faces[n].iter().position(|&v| v as usize >= bound) {
                return Err(Error::Malformed(format!(
                    "face table of dimension {n}: entry {pos} = {} is not a cell of dimension {}",
                    set.faces[n][pos],
                    n - 1
                )));
            }
        }
        Ok(set)
    }

    /// Like [`SquareSet::new`] but leaves out-of-range entries for
    /// [`SquareSet::validate`] to report. Other operations assume a valid set.
    pub fn from_raw_parts(
        cell_counts: Vec<usize>,
        faces: Vec<Vec<u32>>,
        labels: Option<Vec<Vec<String>>>,
        truncated: bool,
    ) -> Result<Self> {
        if cell_counts.is_empty() {
            return Err(Error::Malformed("a □-set needs at least dimension 0".into()));
        }
        let max_dim = cell_counts.len() - 1;
        if faces.len() != max_dim + 1 || !faces[0].is_empty() {
            return Err(Error::Malformed(format!(
                "expected face tables for dimensions 1..={max_dim}"
            )));
        }
        for n in 1..=max_dim {
            if faces[n].len() != 2 * n * cell_counts[n] {
                return Err(Error::Malformed(format!(
                    "face table of dimension {n} has {} entries, expected {}",
                    faces[n].len(),
                    2 * n * cell_counts[n]
                )));
            }
        }
        if let Some(l) = &labels {
            if l.len() != max_dim + 1 || l.iter().zip(&cell_counts).any(|(v, &c)| v.len() != c) {
                return Err(Error::Malformed("label table does not match cell counts".into()));
            }
        }
        Ok(SquareSet { max_dim, cell_counts, faces, labels, truncated })
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn cell_count(&self, n: usize) -> usize {
        self.cell_counts.get(n).copied().unwrap_or(0)
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

    pub fn total_cells(&self) -> usize {
        self.cell_counts.iter().sum()
    }

    /// Whether higher-dimensional cells were cut off. A non-truncated set is
    /// the whole □-set (for instance a single cube).
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Highest homology degree that the truncation does not affect.
    pub fn trusted_degree(&self) -> Option<usize> {
        if self.truncated {
            self.max_dim.checked_sub(1)
        } else {
            Some(usize::MAX)
        }
    }

    pub fn labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    pub fn label(&self, cell: CellRef) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(cell.dim)?.get(cell.index)).map(String::as_str)
    }

    pub fn set_labels(&mut self, labels: Option<Vec<Vec<String>>>) -> Result<()> {
        if let Some(l) = &labels {
            if l.len() != self.max_dim + 1
                || l.iter().zip(&self.cell_counts).any(|(v, &c)| v.len() != c)
            {
                return Err(Error::Malformed("label table does not match cell counts".into()));
            }
        }
        self.labels = labels;
        Ok(())
    }

    /// Raw face table of dimension `n`.
    pub fn face_table(&self, n: usize) -> &[u32] {
        &self.faces[n]
    }

    /// The `2n` faces of cell `x` of dimension `n`.
    #[inline]
    pub fn face_row(&self, n: usize, x: usize) -> &[u32] {
        &self.faces[n][2 * n * x..2 * n * (x + 1)]
    }

    /// `∂_i^ε x` for a cell `x` of dimension `n`. Panics on bad arguments.
    #[inline]
    pub fn face(&self, n: usize, x: usize, i: usize, eps: u8) -> usize {
        self.faces[n][2 * n * x + 2 * (i - 1) + eps as usize] as usize
    }

    /// Checked first-order face `∂_i^ε x`.
    pub fn first_order_face(&self, x: CellRef, i: usize, eps: u8) -> Result<CellRef> {
        self.check_cell(x)?;
        if x.dim == 0 || i == 0 || i > x.dim || eps > 1 {
            return Err(Error::Malformed(format!(
                "no first order face ∂_{i}^{eps} on a cell of dimension {}",
                x.dim
            )));
        }
        let v = self.face(x.dim, x.index, i, eps);
        if v >= self.cell_counts[x.dim - 1] {
            return Err(Error::Malformed(format!(
                "face table entry {v} for {x} is out of range"
            )));
        }
        Ok(CellRef::new(x.dim - 1, v))
    }

    pub fn check_cell(&self, x: CellRef) -> Result<()> {
        if x.dim > self.max_dim || x.index >= self.cell_counts[x.dim] {
            return Err(Error::Malformed(format!("{x} is not a cell of this □-set")));
        }
        Ok(())
    }

    /// `λ^* x`, applying first-order faces from the highest inserted position down.
    pub fn apply_face_word(&self, x: CellRef, word: &FaceWord) -> Result<CellRef> {
        if word.target_dim() != x.dim {
            return Err(Error::DimensionMismatch(format!(
                "face map into I^{} applied to a cell of dimension {}",
                word.target_dim(),
                x.dim
            )));
        }
        let mut cur = x;
        for (i, eps) in word.first_order_factors() {
            cur = self.first_order_face(cur, i, eps)?;
        }
        Ok(cur)
    }

    /// Unchecked variant of [`SquareSet::apply_face_word`] on insertion lists.
    #[inline]
    pub(crate) fn apply_insertions(&self, mut n: usize, mut x: usize, insertions: &[(usize, u8)]) -> usize {
        for &(i, eps) in insertions.iter().rev() {
            x = self.face(n, x, i, eps);
            n -= 1;
        }
        x
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.cell_counts
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i128 } else { -(c as i128) })
            .sum()
    }

    /// Checks index ranges and every face relation
    /// `∂^η_{j-1} ∂^ε_i x = ∂^ε_i ∂^η_j x` for `i < j`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut bad: Vec<Vec<bool>> = vec![Vec::new(); self.max_dim + 1];
        for n in 1..=self.max_dim {
            let bound = self.cell_counts[n - 1];
            bad[n] = vec![false; self.cell_counts[n]];
            for x in 0..self.cell_counts[n] {
                for (slot, &v) in self.face_row(n, x).iter().enumerate() {
                    if v as usize >= bound {
                        bad[n][x] = true;
                        report.violations.push(Violation::IndexOutOfRange {
                            n,
                            i: slot / 2 + 1,
                            eps: (slot % 2) as u8,
                            cell: x,
                            value: v as usize,
                            bound,
                        });
                    }
                }
            }
        }
        for n in 2..=self.max_dim {
            for x in 0..self.cell_counts[n] {
                if bad[n][x] {
                    continue;
                }
                for j in 2..=n {
                    for i in 1..j {
                        for eps in 0..2u8 {
                            for eta in 0..2u8 {
                                let a = self.face(n, x, i, eps);
                                let b = self.face(n, x, j, eta);
                                if bad[n - 1][a] || bad[n - 1][b] {
                                    continue;
                                }
                                let lhs = self.face(n - 1, a, j - 1, eta);
                                let rhs = self.face(n - 1, b, i, eps);
                                if lhs != rhs {
                                    report.violations.push(Violation::FaceRelation {
                                        n,
                                        i,
                                        j,
                                        eps,
                                        eta,
                                        cell: x,
                                        lhs,
                                        rhs,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Keeps dimensions `0..=n` only.
    pub fn truncate(&self, n: usize) -> SquareSet {
        if n >= self.max_dim {
            return self.clone();
        }
        SquareSet {
            max_dim: n,
            cell_counts: self.cell_counts[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..=n].to_vec()),
            truncated: self.truncated || self.cell_counts[n + 1..].iter().any(|&c| c > 0),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SquareSetJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<SquareSet> {
        let raw: SquareSetJson = serde_json::from_str(text)?;
        raw.into_set()
    }
}

#[derive(Serialize, Deserialize)]
struct FacePairJson {
    #[serde(rename = "0")]
    zero: Vec<u32>,
    #[serde(rename = "1")]
    one: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SquareSetJson {
    max_dim: usize,
    cells: Vec<usize>,
    faces: BTreeMap<usize, BTreeMap<usize, FacePairJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
    #[serde(default = "default_truncated")]
    truncated: bool,
}

fn default_truncated() -> bool {
    true
}

impl From<&SquareSet> for SquareSetJson {
    fn from(c: &SquareSet) -> Self {
        let mut faces = BTreeMap::new();
        for n in 1..=c.max_dim {
            let mut per_i = BTreeMap::new();
            for i in 1..=n {
                let col = |eps: u8| (0..c.cell_counts[n]).map(|x| c.face(n, x, i, eps) as u32).collect();
                per_i.insert(i, FacePairJson { zero: col(0), one: col(1) });
            }
            faces.insert(n, per_i);
        }
        SquareSetJson {
            max_dim: c.max_dim,
            cells: c.cell_counts.clone(),
            faces,
            labels: c.labels.clone(),
            truncated: c.truncated,
        }
    }
}

impl SquareSetJson {
    fn into_set(self) -> Result<SquareSet> {
        if self.cells.len() != self.max_dim + 1 {
            return Err(Error::Malformed(format!(
                "max_dim {} but {} cell counts",
                self.max_dim,
                self.cells.len()
            )));
        }
        let mut faces = vec![Vec::new(); self.max_dim + 1];
        for n in 1..=self.max_dim {
            let per_i = self
                .faces
                .get(&n)
                .ok_or_else(|| Error::Malformed(format!("missing faces for dimension {n}")))?;
            let count = self.cells[n];
            let mut table = vec![0u32; 2 * n * count];
            for i in 1..=n {
                let pair = per_i
                    .get(&i)
                    .ok_or_else(|| Error::Malformed(format!("missing ∂_{i} in dimension {n}")))?;
                if pair.zero.len() != count || pair.one.len() != count {
                    return Err(Error::Malformed(format!(
                        "∂_{i} table in dimension {n} has the wrong length"
                    )));
                }
                for x in 0..count {
                    table[2 * n * x + 2 * (i - 1)] = pair.zero[x];
                    table[2 * n * x + 2 * (i - 1) + 1] = pair.one[x];
                }
            }
            faces[n] = table;
        }
        if self.faces.keys().any(|&n| n == 0 || n > self.max_dim) {
            return Err(Error::Malformed("face table for a dimension out of range".into()));
        }
        SquareSet::new(self.cells, faces, self.labels, self.truncated)
    }
}

/// A □-map: level functions commuting with all first-order faces.
#[derive(Clone, Debug)]
pub struct SquareMap {
    source: Arc<SquareSet>,
    target: Arc<SquareSet>,
    levels: Vec<Vec<u32>>,
}

impl SquareMap {
    /// Checks shapes and ranges. Commutation is checked by [`SquareMap::validate`].
    pub fn new(source: Arc<SquareSet>, target: Arc<SquareSet>, levels: Vec<Vec<u32>>) -> Result<Self> {
        if target.max_dim < source.max_dim {
            return Err(Error::InvalidMap(format!(
                "target truncated at {} below source dimension {}",
                target.max_dim, source.max_dim
            )));
        }
        if levels.len() != source.max_dim + 1 {
            return Err(Error::InvalidMap("one level function per source dimension expected".into()));
        }
        for (n, level) in levels.iter().enumerate() {
            if level.len() != source.cell_counts[n] {
                return Err(Error::InvalidMap(format!("level {n} has the wrong length")));
            }
            if let Some(&v) = level.iter().find(|&&v| v as usize >= target.cell_counts[n]) {
                return Err(Error::InvalidMap(format!(
                    "level {n} sends a cell to {v}, out of range"
                )));
            }
        }
        Ok(SquareMap { source, target, levels })
    }

    pub fn identity(c: Arc<SquareSet>) -> Self {
        let levels = c.cell_counts.iter().map(|&m| (0..m as u32).collect()).collect();
        SquareMap { source: c.clone(), target: c, levels }
    }

    pub fn source(&self) -> &Arc<SquareSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SquareSet> {
        &self.target
    }

    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    #[inline]
    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.levels[n][x] as usize
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SquareMap) -> Result<SquareMap> {
        if !Arc::ptr_eq(&inner.target, &self.source) && *inner.target != *self.source {
            return Err(Error::InvalidMap("maps are not composable".into()));
        }
        let levels = inner
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| l.iter().map(|&x| self.levels[n][x as usize]).collect())
            .collect();
        Ok(SquareMap { source: inner.source.clone(), target: self.target.clone(), levels })
    }

    /// Checks `f_{n-1} ∂^ε_i = ∂^ε_i f_n` on every cell.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (n, level) in self.levels.iter().enumerate() {
            for (x, &v) in level.iter().enumerate() {
                if v as usize >= self.target.cell_count(n) {
                    report.violations.push(Violation::MapOutOfRange {
                        n,
                        cell: x,
                        value: v as usize,
                        bound: self.target.cell_count(n),
                    });
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        for n in 1..=self.source.max_dim {
            for x in 0..self.source.cell_counts[n] {
                let fx = self.apply(n, x);
                for i in 1..=n {
                    for eps in 0..2u8 {
                        let lhs = self.apply(n - 1, self.source.face(n, x, i, eps));
                        let rhs = self.target.face(n, fx, i, eps);
                        if lhs != rhs {
                            report.violations.push(Violation::MapNotCommuting {
                                n,
                                i,
                                eps,
                                cell: x,
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
        report
    }
}

impl PartialEq for SquareMap {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.levels == other.levels
    }
}
