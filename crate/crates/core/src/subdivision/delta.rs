use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::chain::{ChainComplex, Ring, SparseMatrix};
use crate::error::{Error, Result};
use crate::face::combinations;
use crate::square::{CellRef, ValidationReport, Violation};

/// A finite Δ-set (semi-simplicial set) truncated at `max_dim`.
///
/// The face table of dimension `k` stores the `k + 1` values `∂_i x` of each
/// simplex `x` at offset `(k + 1) x + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSet {
    max_dim: usize,
    cell_counts: Vec<usize>,
    faces: Vec<Vec<u32>>,
    labels: Option<Vec<Vec<String>>>,
    truncated: bool,
}

impl DeltaSet {
    /// Checks shapes and index ranges; the Δ-relations are left to
    /// [`DeltaSet::validate`].
    pub fn new(
        cell_counts: Vec<usize>,
        faces: Vec<Vec<u32>>,
        labels: Option<Vec<Vec<String>>>,
        truncated: bool,
    ) -> Result<DeltaSet> {
        let set = DeltaSet::from_raw_parts(cell_counts, faces, labels, truncated)?;
        for k in 1..=set.max_dim {
            let bound = set.cell_counts[k - 1];
            if let Some(pos) = set.faces[k].iter().position(|&v| v as usize >= bound) {
                return Err(Error::Malformed(format!(
                    "face table of dimension {k}: entry {pos} = {} is not a simplex of dimension {}",
                    set.faces[k][pos],
                    k - 1
                )));
            }
        }
        Ok(set)
    }

    /// Shape checks only; out-of-range entries are reported by [`DeltaSet::validate`].
    pub fn from_raw_parts(
        cell_counts: Vec<usize>,
        faces: Vec<Vec<u32>>,
        labels: Option<Vec<Vec<String>>>,
        truncated: bool,
    ) -> Result<DeltaSet> {
        if cell_counts.is_empty() {
            return Err(Error::Malformed("a Δ-set needs at least dimension 0".into()));
        }
        let max_dim = cell_counts.len() - 1;
        if faces.len() != max_dim + 1 || !faces[0].is_empty() {
            return Err(Error::Malformed(format!("expected face tables for dimensions 1..={max_dim}")));
        }
        for k in 1..=max_dim {
            if faces[k].len() != (k + 1) * cell_counts[k] {
                return Err(Error::Malformed(format!(
                    "face table of dimension {k} has {} entries, expected {}",
                    faces[k].len(),
                    (k + 1) * cell_counts[k]
                )));
            }
        }
        if let Some(l) = &labels {
            if l.len() != max_dim + 1 || l.iter().zip(&cell_counts).any(|(v, &c)| v.len() != c) {
                return Err(Error::Malformed("label table does not match cell counts".into()));
            }
        }
        Ok(DeltaSet { max_dim, cell_counts, faces, labels, truncated })
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cell_counts.get(k).copied().unwrap_or(0)
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

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

    #[inline]
    pub fn face_row(&self, k: usize, x: usize) -> &[u32] {
        &self.faces[k][(k + 1) * x..(k + 1) * (x + 1)]
    }

    /// `∂_i x` for a simplex `x` of dimension `k`, `0 <= i <= k`.
    #[inline]
    pub fn face(&self, k: usize, x: usize, i: usize) -> usize {
        self.faces[k][(k + 1) * x + i] as usize
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.cell_counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i128 } else { -(c as i128) })
            .sum()
    }

    /// Index ranges and `∂_i ∂_j x = ∂_{j-1} ∂_i x` for all `i < j`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut bad: Vec<Vec<bool>> = vec![vec![false; self.cell_counts[0]]];
        for k in 1..=self.max_dim {
            let bound = self.cell_counts[k - 1];
            let mut flags = vec![false; self.cell_counts[k]];
            for (x, flag) in flags.iter_mut().enumerate() {
                for (i, &v) in self.face_row(k, x).iter().enumerate() {
                    if v as usize >= bound {
                        *flag = true;
                        report.violations.push(Violation::DeltaIndexOutOfRange { k, i, cell: x, value: v as usize, bound });
                    }
                }
            }
            bad.push(flags);
        }
        for k in 2..=self.max_dim {
            for x in 0..self.cell_counts[k] {
                if bad[k][x] {
                    continue;
                }
                for j in 1..=k {
                    for i in 0..j {
                        let (a, b) = (self.face(k, x, j), self.face(k, x, i));
                        if bad[k - 1][a] || bad[k - 1][b] {
                            continue;
                        }
                        let lhs = self.face(k - 1, a, i);
                        let rhs = self.face(k - 1, b, j - 1);
                        if lhs != rhs {
                            report.violations.push(Violation::DeltaRelation { k, i, j, cell: x, lhs, rhs });
                        }
                    }
                }
            }
        }
        report
    }

    /// Keeps dimensions `0..=k` only.
    pub fn truncate(&self, k: usize) -> DeltaSet {
        if k >= self.max_dim {
            return self.clone();
        }
        DeltaSet {
            max_dim: k,
            cell_counts: self.cell_counts[..=k].to_vec(),
            faces: self.faces[..=k].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..=k].to_vec()),
            truncated: self.truncated || self.cell_counts[k + 1..].iter().any(|&c| c > 0),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DeltaSetJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<DeltaSet> {
        let raw: DeltaSetJson = serde_json::from_str(text)?;
        raw.into_set()
    }
}

/// `∂ = Σ_i (-1)^i ∂_i` on simplices of each dimension.
pub fn delta_chain_complex(x: &DeltaSet, ring: Ring) -> Result<ChainComplex> {
    let mut boundaries = vec![SparseMatrix::zero(0, x.cell_count(0))];
    for k in 1..=x.max_dim() {
        let columns = (0..x.cell_count(k)).map(|s| {
            x.face_row(k, s)
                .iter()
                .enumerate()
                .map(|(i, &f)| (f as usize, if i % 2 == 0 { 1 } else { -1 }))
                .collect::<Vec<_>>()
        });
        boundaries.push(SparseMatrix::from_columns(x.cell_count(k - 1), columns, ring));
    }
    ChainComplex::new(ring, boundaries, x.trusted_degree())
}

/// The Δ-set of all faces of the `n`-simplex, vertices `0..=n`; simplices of
/// dimension `k` are the `(k+1)`-subsets in lexicographic order.
pub fn standard_simplex(n: usize) -> DeltaSet {
    simplex_faces(n, n)
}

/// The boundary of the `n`-simplex (all proper faces), for `n >= 1`.
pub fn simplex_boundary(n: usize) -> Result<DeltaSet> {
    if n == 0 {
        return Err(Error::Malformed("the 0-simplex has empty boundary".into()));
    }
    Ok(simplex_faces(n, n - 1))
}

fn simplex_faces(n: usize, top: usize) -> DeltaSet {
    let subsets: Vec<Vec<Vec<usize>>> = (0..=top).map(|k| combinations(n + 1, k + 1)).collect();
    let mut faces = vec![Vec::new()];
    for k in 1..=top {
        let mut table = Vec::with_capacity((k + 1) * subsets[k].len());
        for s in &subsets[k] {
            for i in 0..=k {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                table.push(crate::face::combination_rank(n + 1, &face) as u32);
            }
        }
        faces.push(table);
    }
    let labels = subsets
        .iter()
        .map(|ss| {
            ss.iter()
                .map(|s| {
                    let vs: Vec<String> = s.iter().map(|v| (v - 1).to_string()).collect();
                    format!("[{}]", vs.join(","))
                })
                .collect()
        })
        .collect();
    let counts = subsets.iter().map(Vec::len).collect();
    DeltaSet::new(counts, faces, Some(labels), false).expect("simplex faces are well formed")
}

#[derive(Serialize, Deserialize)]
struct DeltaSetJson {
    max_dim: usize,
    cells: Vec<usize>,
    faces: BTreeMap<usize, BTreeMap<usize, Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
    #[serde(default = "default_truncated")]
    truncated: bool,
}

fn default_truncated() -> bool {
    true
}

impl From<&DeltaSet> for DeltaSetJson {
    fn from(d: &DeltaSet) -> Self {
        let mut faces = BTreeMap::new();
        for k in 1..=d.max_dim {
            let per_i = (0..=k).map(|i| (i, (0..d.cell_counts[k]).map(|x| d.face(k, x, i) as u32).collect())).collect();
            faces.insert(k, per_i);
        }
        DeltaSetJson {
            max_dim: d.max_dim,
            cells: d.cell_counts.clone(),
            faces,
            labels: d.labels.clone(),
            truncated: d.truncated,
        }
    }
}

impl DeltaSetJson {
    fn into_set(self) -> Result<DeltaSet> {
        if self.cells.len() != self.max_dim + 1 {
            return Err(Error::Malformed(format!("max_dim {} but {} cell counts", self.max_dim, self.cells.len())));
        }
        if self.faces.keys().any(|&k| k == 0 || k > self.max_dim) {
            return Err(Error::Malformed("face table for a dimension out of range".into()));
        }
        let mut faces = vec![Vec::new(); self.max_dim + 1];
        for k in 1..=self.max_dim {
            let per_i = self.faces.get(&k).ok_or_else(|| Error::Malformed(format!("missing faces for dimension {k}")))?;
            let count = self.cells[k];
            let mut table = vec![0u32; (k + 1) * count];
            for i in 0..=k {
                let col = per_i.get(&i).ok_or_else(|| Error::Malformed(format!("missing ∂_{i} in dimension {k}")))?;
                if col.len() != count {
                    return Err(Error::Malformed(format!("∂_{i} table in dimension {k} has the wrong length")));
                }
                for (x, &v) in col.iter().enumerate() {
                    table[(k + 1) * x + i] = v;
                }
            }
            faces[k] = table;
        }
        DeltaSet::new(self.cells, faces, self.labels, self.truncated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::homology::homology;

    #[test]
    fn simplices_are_valid() {
        for n in 0..6 {
            let s = standard_simplex(n);
            assert!(s.validate().is_empty());
            assert_eq!(s.euler_characteristic(), 1);
        }
        let s2 = standard_simplex(2);
        assert_eq!(s2.cell_counts(), &[3, 3, 1]);
        // ∂_0 [0,1,2] = [1,2], ∂_2 [0,1,2] = [0,1]
        assert_eq!(s2.label(CellRef::new(1, s2.face(2, 0, 0))), Some("[1,2]"));
        assert_eq!(s2.label(CellRef::new(1, s2.face(2, 0, 2))), Some("[0,1]"));
    }

    #[test]
    fn sphere_homology() {
        for n in 1..5 {
            let b = simplex_boundary(n).unwrap();
            assert!(b.validate().is_empty());
            let h = homology(&delta_chain_complex(&b, Ring::Z).unwrap());
            for (d, g) in h.iter().enumerate() {
                let expected = usize::from(d == 0) + usize::from(d == n - 1);
                assert!(g.is_free_of_rank(expected), "S^{} degree {d}: {g}", n - 1);
            }
        }
    }

    #[test]
    fn reports_relation_failures() {
        let mut s = standard_simplex(2);
        s.faces[1].swap(0, 1);
        let r = s.validate();
        assert!(!r.is_empty());
        assert!(matches!(r.first(), Some(Violation::DeltaRelation { .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = standard_simplex(3);
        assert_eq!(DeltaSet::from_json(&s.to_json().unwrap()).unwrap(), s);
        let text = r#"{"max_dim":1,"cells":[2,1],"faces":{"1":{"0":[1],"1":[0]}}}"#;
        let d = DeltaSet::from_json(text).unwrap();
        assert!(d.is_truncated());
        assert_eq!(d.face(1, 0, 0), 1);
        assert!(DeltaSet::from_json(r#"{"max_dim":1,"cells":[2,1],"faces":{"1":{"0":[5],"1":[0]}}}"#).is_err());
    }
}
