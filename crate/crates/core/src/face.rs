//! Face maps of the cube category.
//!
//! A face map `I^p -> I^n` keeps the order of the input coordinates and
//! inserts `n - p` constant coordinates. Its canonical form is the list of
//! inserted `(position, value)` pairs sorted by target position (positions
//! are 1-based, as are cube directions throughout the crate).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A symbolic cube coordinate: a constant, the midpoint, or an input variable
/// (0-based variable index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Zero,
    One,
    Half,
    Var(usize),
}

impl Coord {
    pub fn constant(eps: u8) -> Coord {
        if eps == 0 {
            Coord::Zero
        } else {
            Coord::One
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Zero => write!(f, "0"),
            Coord::One => write!(f, "1"),
            Coord::Half => write!(f, "1/2"),
            Coord::Var(i) => write!(f, "x{}", i + 1),
        }
    }
}

/// The input variables `x1, ..., xd` as symbolic coordinates.
pub fn variables(d: usize) -> Vec<Coord> {
    (0..d).map(Coord::Var).collect()
}

/// A face map `I^p -> I^n` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceWord {
    source_dim: usize,
    target_dim: usize,
    insertions: Vec<(usize, u8)>,
}

impl FaceWord {
    /// Builds a face word, checking that positions are strictly increasing,
    /// lie in `1..=target_dim`, and that there are `target_dim - source_dim`
    /// of them.
    pub fn new(source_dim: usize, target_dim: usize, insertions: Vec<(usize, u8)>) -> Result<Self> {
        if source_dim > target_dim {
            return Err(Error::DimensionMismatch(format!(
                "face map source {source_dim} exceeds target {target_dim}"
            )));
        }
        if insertions.len() != target_dim - source_dim {
            return Err(Error::Malformed(format!(
                "face map I^{source_dim} -> I^{target_dim} needs {} insertions, got {}",
                target_dim - source_dim,
                insertions.len()
            )));
        }
        let mut last = 0;
        for &(pos, eps) in &insertions {
            if pos <= last || pos > target_dim || eps > 1 {
                return Err(Error::Malformed(format!(
                    "bad insertion ({pos}, {eps}) in face map to I^{target_dim}"
                )));
            }
            last = pos;
        }
        Ok(FaceWord { source_dim, target_dim, insertions })
    }

    pub fn identity(n: usize) -> Self {
        FaceWord { source_dim: n, target_dim: n, insertions: Vec::new() }
    }

    /// The first order face map `delta_i^eps : I^{n-1} -> I^n`.
    pub fn first_order(n: usize, i: usize, eps: u8) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("no first order faces into I^0".into()));
        }
        FaceWord::new(n - 1, n, vec![(i, eps)])
    }

    /// Face map from a kept-position mask: `kept[j]` is `None` for a free
    /// coordinate and `Some(eps)` for an inserted constant.
    pub fn from_pattern(pattern: &[Option<u8>]) -> Self {
        let insertions: Vec<(usize, u8)> = pattern
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.map(|eps| (j + 1, eps)))
            .collect();
        FaceWord {
            source_dim: pattern.len() - insertions.len(),
            target_dim: pattern.len(),
            insertions,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn insertions(&self) -> &[(usize, u8)] {
        &self.insertions
    }

    pub fn is_identity(&self) -> bool {
        self.insertions.is_empty()
    }

    /// Inserts only zeros.
    pub fn is_front(&self) -> bool {
        self.insertions.iter().all(|&(_, e)| e == 0)
    }

    /// Inserts only ones.
    pub fn is_back(&self) -> bool {
        self.insertions.iter().all(|&(_, e)| e == 1)
    }

    /// Target positions (1-based) that carry input coordinates, in order.
    pub fn kept_positions(&self) -> Vec<usize> {
        let mut ins = self.insertions.iter().peekable();
        let mut kept = Vec::with_capacity(self.source_dim);
        for pos in 1..=self.target_dim {
            if ins.peek().map(|&&(p, _)| p) == Some(pos) {
                ins.next();
            } else {
                kept.push(pos);
            }
        }
        kept
    }

    /// Per target coordinate: `None` if it carries an input, `Some(eps)` if constant.
    pub fn pattern(&self) -> Vec<Option<u8>> {
        let mut out = vec![None; self.target_dim];
        for &(p, e) in &self.insertions {
            out[p - 1] = Some(e);
        }
        out
    }

    /// Evaluates the map on a symbolic point of `I^p`.
    pub fn eval(&self, point: &[Coord]) -> Result<Vec<Coord>> {
        if point.len() != self.source_dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} fed to a face map from I^{}",
                point.len(),
                self.source_dim
            )));
        }
        let mut src = point.iter();
        Ok(self
            .pattern()
            .into_iter()
            .map(|c| match c {
                Some(eps) => Coord::constant(eps),
                None => *src.next().expect("pattern has source_dim free slots"),
            })
            .collect())
    }

    /// Reads a face map off its action on the variables `x1..xp`.
    fn from_image(source_dim: usize, image: &[Coord]) -> Self {
        let insertions = image
            .iter()
            .enumerate()
            .filter_map(|(j, c)| match c {
                Coord::Zero => Some((j + 1, 0)),
                Coord::One => Some((j + 1, 1)),
                _ => None,
            })
            .collect();
        FaceWord { source_dim, target_dim: image.len(), insertions }
    }

    /// The composite `self ∘ inner`.
    pub fn compose(&self, inner: &FaceWord) -> Result<FaceWord> {
        if inner.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose I^{} -> I^{} after I^{} -> I^{}",
                self.source_dim, self.target_dim, inner.source_dim, inner.target_dim
            )));
        }
        let image = self.eval(&inner.eval(&variables(inner.source_dim))?)?;
        Ok(FaceWord::from_image(inner.source_dim, &image))
    }

    /// The unique factorisation `self = front ∘ back` with `front` inserting
    /// only zeros and `back` only ones.
    pub fn front_back_decompose(&self) -> (FaceWord, FaceWord) {
        let front_ins: Vec<(usize, u8)> =
            self.insertions.iter().copied().filter(|&(_, e)| e == 0).collect();
        let mid = self.target_dim - front_ins.len();
        let mut back_ins = Vec::new();
        let mut rank = 0;
        let mut zeros = front_ins.iter().peekable();
        for (pos, c) in self.pattern().into_iter().enumerate() {
            if zeros.peek().map(|&&(p, _)| p) == Some(pos + 1) {
                zeros.next();
                continue;
            }
            rank += 1;
            if c == Some(1) {
                back_ins.push((rank, 1));
            }
        }
        (
            FaceWord { source_dim: mid, target_dim: self.target_dim, insertions: front_ins },
            FaceWord { source_dim: self.source_dim, target_dim: mid, insertions: back_ins },
        )
    }

    /// First order faces `(i, eps)` to apply to a cell, in application order
    /// (highest insertion position first): `self^* = ∂_{q1} ∘ ... ∘ ∂_{qr}`.
    pub fn first_order_factors(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.insertions.iter().rev().copied()
    }
}

impl fmt::Display for FaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I^{}->I^{}[", self.source_dim, self.target_dim)?;
        for (k, (p, e)) in self.insertions.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({p},{e})")?;
        }
        write!(f, "]")
    }
}

/// Binomial coefficient as u128, exact for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Number of face maps `I^p -> I^n`, i.e. `C(n, p) * 2^(n - p)`.
pub fn count_face_maps(p: usize, n: usize) -> Result<u128> {
    if p > n {
        return Err(Error::DimensionMismatch(format!("no face maps I^{p} -> I^{n}")));
    }
    Ok(binomial(n as u64, p as u64) << (n - p))
}

/// All `k`-element subsets of `1..=n`, as increasing vectors, in
/// lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Position of an increasing subset of `1..=total` in the order of [`combinations`].
pub fn combination_rank(total: usize, subset: &[usize]) -> usize {
    let n = subset.len();
    let mut rank = 0u128;
    let mut prev = 0;
    for (j, &c) in subset.iter().enumerate() {
        for v in prev + 1..c {
            rank += binomial((total - v) as u64, (n - j - 1) as u64);
        }
        prev = c;
    }
    rank as usize
}

/// Inverse of [`combination_rank`].
pub fn combination_unrank(total: usize, n: usize, mut rank: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut v = 1;
    for j in 0..n {
        loop {
            let below = binomial((total - v) as u64, (n - j - 1) as u64) as usize;
            if rank < below {
                break;
            }
            rank -= below;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    out
}

/// Every face map `I^p -> I^n`: inserted position sets in lexicographic
/// order, then constant values in binary order.
pub fn enumerate_face_words(p: usize, n: usize) -> Vec<FaceWord> {
    if p > n {
        return Vec::new();
    }
    let r = n - p;
    let mut out = Vec::new();
    for positions in combinations(n, r) {
        for bits in 0u32..(1u32 << r) {
            let insertions = positions
                .iter()
                .enumerate()
                .map(|(t, &pos)| (pos, ((bits >> (r - 1 - t)) & 1) as u8))
                .collect();
            out.push(FaceWord { source_dim: p, target_dim: n, insertions });
        }
    }
    out
}
