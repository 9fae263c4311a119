use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::square::SquareSet;

/// Coefficient ring of a chain complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Z,
    Z2,
}

impl Ring {
    /// Canonical representative of `v` in the ring.
    #[inline]
    pub fn reduce(self, v: i64) -> i64 {
        match self {
            Ring::Z => v,
            Ring::Z2 => v.rem_euclid(2),
        }
    }

    #[inline]
    pub fn is_unit(self, v: i64) -> bool {
        match self {
            Ring::Z => v == 1 || v == -1,
            Ring::Z2 => v.rem_euclid(2) == 1,
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Ring::Z),
            "z2" | "z/2" => Ok(Ring::Z2),
            other => Err(Error::Malformed(format!("unknown coefficient ring '{other}'"))),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Z2 => "Z/2",
        })
    }
}

/// A sparse matrix in compressed-column form; entries are nonzero and each
/// column is sorted by row.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_start: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols, col_start: vec![0; cols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// From columns of `(row, value)` pairs; duplicates are summed and zeros
    /// (after reduction in `ring`) dropped.
    pub fn from_columns<I>(rows: usize, columns: I, ring: Ring) -> SparseMatrix
    where
        I: IntoIterator<Item = Vec<(usize, i64)>>,
    {
        let mut m = SparseMatrix { rows, cols: 0, col_start: vec![0], row_idx: Vec::new(), vals: Vec::new() };
        for mut col in columns {
            col.sort_unstable();
            let mut k = 0;
            while k < col.len() {
                let r = col[k].0;
                let mut v = 0i64;
                while k < col.len() && col[k].0 == r {
                    v += col[k].1;
                    k += 1;
                }
                let v = ring.reduce(v);
                if v != 0 {
                    m.row_idx.push(r as u32);
                    m.vals.push(v);
                }
            }
            m.cols += 1;
            m.col_start.push(m.row_idx.len());
        }
        m
    }

    /// From `(row, col, value)` triplets.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)], ring: Ring) -> SparseMatrix {
        let mut columns = vec![Vec::new(); cols];
        for &(r, c, v) in triplets {
            columns[c].push((r, v));
        }
        SparseMatrix::from_columns(rows, columns, ring)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column `c` as parallel slices of rows and values.
    pub fn column(&self, c: usize) -> (&[u32], &[i64]) {
        let (a, b) = (self.col_start[c], self.col_start[c + 1]);
        (&self.row_idx[a..b], &self.vals[a..b])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.cols).flat_map(move |c| {
            let (r, v) = self.column(c);
            r.iter().zip(v).map(move |(&r, &v)| (r as usize, c, v))
        })
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            columns[r].push((c, v));
        }
        SparseMatrix::from_columns(self.cols, columns, Ring::Z)
    }

    /// `self · other`, reduced in `ring`.
    pub fn mul(&self, other: &SparseMatrix, ring: Ring) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let columns = (0..other.cols).map(|c| {
            let (rs, vs) = other.column(c);
            let mut out = Vec::new();
            for (&k, &w) in rs.iter().zip(vs) {
                let (rr, vv) = self.column(k as usize);
                out.extend(rr.iter().zip(vv).map(|(&r, &v)| (r as usize, v * w)));
            }
            out
        });
        SparseMatrix::from_columns(self.rows, columns, ring)
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }
}

/// Boundary matrices `∂_n: C_n → C_{n-1}` over `Z` or `Z/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: Vec<usize>,
    /// `boundaries[n]` is `∂_n`; `boundaries[0]` is the zero map out of `C_0`.
    boundaries: Vec<SparseMatrix>,
    trusted: Option<usize>,
}

impl ChainComplex {
    /// Assembles a complex and checks shapes and `∂∂ = 0`.
    pub fn new(ring: Ring, boundaries: Vec<SparseMatrix>, trusted: Option<usize>) -> Result<ChainComplex> {
        if boundaries.is_empty() {
            return Err(Error::Malformed("a chain complex needs degree 0".into()));
        }
        let ranks: Vec<usize> = boundaries.iter().map(SparseMatrix::cols).collect();
        if boundaries[0].rows() != 0 {
            return Err(Error::Malformed("the boundary out of degree 0 must be zero".into()));
        }
        for n in 1..boundaries.len() {
            if boundaries[n].rows() != ranks[n - 1] {
                return Err(Error::DimensionMismatch(format!("∂_{n} has the wrong number of rows")));
            }
        }
        let k = ChainComplex { ring, ranks, boundaries, trusted };
        if let Some(n) = k.first_nonzero_square() {
            return Err(Error::Malformed(format!("∂_{} ∂_{n} is not zero", n - 1)));
        }
        Ok(k)
    }

    /// Cubical chains: `∂x = Σ_i (-1)^i (∂_i^1 x - ∂_i^0 x)`.
    pub fn from_square_set(c: &SquareSet, ring: Ring) -> Result<ChainComplex> {
        let mut boundaries = vec![SparseMatrix::zero(0, c.cell_count(0))];
        for n in 1..=c.max_dim() {
            let columns = (0..c.cell_count(n)).map(|x| {
                let row = c.face_row(n, x);
                let mut col = Vec::with_capacity(2 * n);
                for i in 1..=n {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    col.push((row[2 * (i - 1) + 1] as usize, sign));
                    col.push((row[2 * (i - 1)] as usize, -sign));
                }
                col
            });
            boundaries.push(SparseMatrix::from_columns(c.cell_count(n - 1), columns, ring));
        }
        ChainComplex::new(ring, boundaries, c.trusted_degree())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn max_dim(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_n`; the zero map when `n = 0`.
    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n]
    }

    /// Highest degree whose (co)homology the truncation does not affect.
    pub fn trusted_degree(&self) -> Option<usize> {
        self.trusted
    }

    pub fn is_trusted(&self, degree: usize) -> bool {
        self.trusted.is_some_and(|t| degree <= t)
    }

    /// The smallest `n` with `∂_{n-1} ∂_n ≠ 0`, if any.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        (2..self.boundaries.len())
            .find(|&n| !self.boundaries[n - 1].mul(&self.boundaries[n], self.ring).is_zero())
    }

    /// Text export: per degree a header `dim n rows r cols c`, then `row col value` lines.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for (n, m) in self.boundaries.iter().enumerate() {
            let _ = writeln!(out, "dim {n} rows {} cols {}", m.rows(), m.cols());
            for (r, c, v) in m.triplets() {
                let _ = writeln!(out, "{r} {c} {v}");
            }
        }
        out
    }

    /// Parses [`ChainComplex::export_text`] output.
    pub fn import_text(text: &str, ring: Ring, trusted: Option<usize>) -> Result<ChainComplex> {
        let mut boundaries = Vec::new();
        let mut current: Option<(usize, usize, Vec<(usize, usize, i64)>)> = None;
        let bad = |line: &str| Error::Malformed(format!("cannot parse line '{line}'"));
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts[0] == "dim" {
                if parts.len() != 6 || parts[2] != "rows" || parts[4] != "cols" {
                    return Err(bad(line));
                }
                let n: usize = parts[1].parse().map_err(|_| bad(line))?;
                if n != boundaries.len() + current.is_some() as usize {
                    return Err(Error::Malformed(format!("degree {n} out of order")));
                }
                if let Some((r, c, t)) = current.take() {
                    boundaries.push(SparseMatrix::from_triplets(r, c, &t, ring));
                }
                let r = parts[3].parse().map_err(|_| bad(line))?;
                let c = parts[5].parse().map_err(|_| bad(line))?;
                current = Some((r, c, Vec::new()));
            } else {
                let (r, c, t) = current.as_mut().ok_or_else(|| bad(line))?;
                if parts.len() != 3 {
                    return Err(bad(line));
                }
                let row: usize = parts[0].parse().map_err(|_| bad(line))?;
                let col: usize = parts[1].parse().map_err(|_| bad(line))?;
                let v: i64 = parts[2].parse().map_err(|_| bad(line))?;
                if row >= *r || col >= *c {
                    return Err(bad(line));
                }
                t.push((row, col, v));
            }
        }
        if let Some((r, c, t)) = current.take() {
            boundaries.push(SparseMatrix::from_triplets(r, c, &t, ring));
        }
        ChainComplex::new(ring, boundaries, trusted)
    }
}
