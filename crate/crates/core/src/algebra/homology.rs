//! Homology and cohomology through a discrete Morse reduction followed by
//! Smith normal form.
//!
//! A coreduction pairs a cell `a` with the single live face `b` left in its
//! boundary when the coefficient is a unit. When no coreduction applies, a
//! live cell of lowest degree (which then has no live faces) is declared
//! critical. The pairs form an acyclic matching, and the differential of the
//! Morse complex on the critical cells is obtained by following gradient
//! paths. The Morse complex is chain homotopy equivalent to the original.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::chain::{ChainComplex, Ring, SparseMatrix};
use crate::algebra::snf::smith_in;

/// Cells and boundaries that the reduction engine can walk without a
/// materialized matrix.
pub trait CellComplex {
    fn max_dim(&self) -> usize;
    fn count(&self, d: usize) -> usize;
    /// Nonzero coefficients of `∂x`, each face once, already reduced in the ring.
    fn boundary(&self, d: usize, x: usize, out: &mut Vec<(usize, i64)>);
    /// Cells of dimension `d + 1` whose boundary contains `x`, each once.
    fn cofaces(&self, d: usize, x: usize, out: &mut Vec<usize>);
}

/// A chain complex with its transposed boundaries, for coface lookups.
pub struct IndexedComplex<'a> {
    complex: &'a ChainComplex,
    transposed: Vec<SparseMatrix>,
}

impl<'a> IndexedComplex<'a> {
    pub fn new(complex: &'a ChainComplex) -> Self {
        let transposed = (0..=complex.max_dim()).map(|n| complex.boundary(n).transpose()).collect();
        IndexedComplex { complex, transposed }
    }
}

impl CellComplex for IndexedComplex<'_> {
    fn max_dim(&self) -> usize {
        self.complex.max_dim()
    }

    fn count(&self, d: usize) -> usize {
        self.complex.rank(d)
    }

    fn boundary(&self, d: usize, x: usize, out: &mut Vec<(usize, i64)>) {
        out.clear();
        let (r, v) = self.complex.boundary(d).column(x);
        out.extend(r.iter().map(|&r| r as usize).zip(v.iter().copied()));
    }

    fn cofaces(&self, d: usize, x: usize, out: &mut Vec<usize>) {
        out.clear();
        if d < self.complex.max_dim() {
            out.extend(self.transposed[d + 1].column(x).0.iter().map(|&c| c as usize));
        }
    }
}

const DEAD: u8 = 0x80;
const QUEUED: u8 = 0x40;
const COUNT: u8 = 0x3f;
// kind of a dead cell, stored in the low bits
const UPPER: u8 = 0;
const LOWER: u8 = 1;
const CRITICAL: u8 = 2;

/// The Morse complex left by the reduction: critical cells per degree and
/// the differential between them.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub ring: Ring,
    pub survivors: Vec<usize>,
    /// `matrices[d]`: Morse `∂_d`, rows indexed by the critical cells of
    /// degree `d - 1`; columns with zero boundary are dropped.
    pub matrices: Vec<SparseMatrix>,
}

struct Engine<'a, C: CellComplex> {
    cx: &'a C,
    ring: Ring,
    top: usize,
    state: Vec<Vec<u8>>,
    time: Vec<Vec<u32>>,
    clock: u32,
    queue: VecDeque<(u8, u32)>,
    zero: Vec<VecDeque<u32>>,
    bd: Vec<(usize, i64)>,
    cof: Vec<usize>,
}

impl<C: CellComplex> Engine<'_, C> {
    fn kill(&mut self, d: usize, x: usize, kind: u8, stamp: u32) {
        self.state[d][x] = DEAD | kind;
        self.time[d][x] = stamp;
        if d < self.top {
            self.cx.cofaces(d, x, &mut self.cof);
            for &y in &self.cof {
                let s = &mut self.state[d + 1][y];
                if *s & DEAD == 0 {
                    *s -= 1;
                    match *s & COUNT {
                        0 => self.zero[d + 1].push_back(y as u32),
                        1 if *s & QUEUED == 0 => {
                            *s |= QUEUED;
                            self.queue.push_back(((d + 1) as u8, y as u32));
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    fn tick(&mut self) -> u32 {
        self.clock = self.clock.checked_add(1).expect("more than 2^32 reduction steps");
        self.clock
    }

    /// Coreductions until none applies.
    fn drain(&mut self) {
        while let Some((d, a)) = self.queue.pop_front() {
            let (d, a) = (d as usize, a as usize);
            self.state[d][a] &= !QUEUED;
            if self.state[d][a] & DEAD != 0 || self.state[d][a] & COUNT != 1 {
                continue;
            }
            self.cx.boundary(d, a, &mut self.bd);
            let state = &self.state;
            let Some(&(b, c)) = self.bd.iter().find(|&&(y, _)| state[d - 1][y] & DEAD == 0) else {
                continue;
            };
            if !self.ring.is_unit(c) {
                continue;
            }
            let stamp = self.tick();
            self.kill(d, a, UPPER, stamp);
            self.kill(d - 1, b, LOWER, stamp);
        }
    }

    /// The earliest live cell of lowest degree left without live faces.
    fn next_critical(&mut self) -> Option<(usize, usize)> {
        for d in 0..=self.top {
            while let Some(x) = self.zero[d].pop_front() {
                let s = self.state[d][x as usize];
                if s & DEAD == 0 && s & COUNT == 0 {
                    return Some((d, x as usize));
                }
            }
        }
        None
    }

    /// Morse boundary of a critical cell: follow the gradient from the
    /// latest removed face backwards until only critical cells remain.
    /// Returns `(critical face, coefficient)` pairs.
    fn flow(&self, d: usize, x: usize) -> Vec<(usize, i64)> {
        let mut coef: HashMap<usize, i64> = HashMap::new();
        let mut heap: BinaryHeap<(u32, usize)> = BinaryHeap::new();
        let mut out = Vec::new();
        let mut bd = Vec::new();
        let mut cof = Vec::new();
        self.cx.boundary(d, x, &mut bd);
        for &(y, c) in &bd {
            coef.insert(y, c);
            heap.push((self.time[d - 1][y], y));
        }
        while let Some((_, y)) = heap.pop() {
            let Some(c) = coef.remove(&y).map(|c| self.ring.reduce(c)) else {
                continue;
            };
            if c == 0 {
                continue;
            }
            match self.state[d - 1][y] & COUNT {
                CRITICAL => out.push((y, c)),
                LOWER => {
                    let t = self.time[d - 1][y];
                    self.cx.cofaces(d - 1, y, &mut cof);
                    let a = *cof
                        .iter()
                        .find(|&&a| self.state[d][a] == DEAD | UPPER && self.time[d][a] == t)
                        .expect("matched cells share a stamp");
                    self.cx.boundary(d, a, &mut bd);
                    let pivot = bd.iter().find(|&&(z, _)| z == y).map(|&(_, v)| v).expect("partner is a face");
                    // pivot is ±1, so c / pivot = c * pivot
                    let factor = c.checked_mul(pivot).expect("coefficient overflow");
                    for &(z, v) in &bd {
                        if z != y {
                            self.accumulate(&mut coef, z, factor, v, || heap.push((self.time[d - 1][z], z)));
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Morse coboundary of a critical cell of degree `d - 1`: the dual flow
    /// forward in time through the cofaces. Returns `(critical coface,
    /// coefficient)` pairs, i.e. one row of the Morse `∂_d`.
    fn coflow(&self, d: usize, r: usize) -> Vec<(usize, i64)> {
        let mut coef: HashMap<usize, i64> = HashMap::new();
        let mut heap: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
        let mut out = Vec::new();
        let mut bd = Vec::new();
        let mut cof = Vec::new();
        self.cx.cofaces(d - 1, r, &mut cof);
        for &z in &cof {
            coef.insert(z, self.entry(d, z, r, &mut bd));
            heap.push(Reverse((self.time[d][z], z)));
        }
        while let Some(Reverse((_, z))) = heap.pop() {
            let Some(c) = coef.remove(&z).map(|c| self.ring.reduce(c)) else {
                continue;
            };
            if c == 0 {
                continue;
            }
            match self.state[d][z] & COUNT {
                CRITICAL => out.push((z, c)),
                UPPER => {
                    let t = self.time[d][z];
                    self.cx.boundary(d, z, &mut bd);
                    let (b, pivot) = *bd
                        .iter()
                        .find(|&&(b, _)| self.state[d - 1][b] == DEAD | LOWER && self.time[d - 1][b] == t)
                        .expect("matched cells share a stamp");
                    let factor = c.checked_mul(pivot).expect("coefficient overflow");
                    self.cx.cofaces(d - 1, b, &mut cof);
                    for &w in &cof {
                        if w != z {
                            let v = self.entry(d, w, b, &mut bd);
                            self.accumulate(&mut coef, w, factor, v, || heap.push(Reverse((self.time[d][w], w))));
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// The coefficient of `y` in `∂z`.
    fn entry(&self, d: usize, z: usize, y: usize, bd: &mut Vec<(usize, i64)>) -> i64 {
        self.cx.boundary(d, z, bd);
        bd.iter().find(|&&(f, _)| f == y).map(|&(_, v)| v).expect("coface has the cell as a face")
    }

    /// `coef[z] -= factor * v`, calling `fresh` when `z` was not yet present.
    fn accumulate(&self, coef: &mut HashMap<usize, i64>, z: usize, factor: i64, v: i64, fresh: impl FnOnce()) {
        let delta = factor.checked_mul(v).expect("coefficient overflow");
        match coef.get_mut(&z) {
            Some(e) => *e = self.ring.reduce(e.checked_sub(delta).expect("coefficient overflow")),
            None => {
                coef.insert(z, self.ring.reduce(-delta));
                fresh();
            }
        }
    }
}

/// Coreduction-driven Morse matching on the cells of dimension `<= top`,
/// then the Morse differential between the critical cells.
///
/// Each Morse `∂_d` is assembled from whichever side has fewer critical
/// cells: columns by flowing boundaries, or rows by flowing coboundaries.
pub fn reduce<C: CellComplex>(cx: &C, ring: Ring, top: usize) -> Reduced {
    let top = top.min(cx.max_dim());
    let mut e = Engine {
        cx,
        ring,
        top,
        state: Vec::with_capacity(top + 1),
        time: Vec::with_capacity(top + 1),
        clock: 0,
        queue: VecDeque::new(),
        zero: vec![VecDeque::new(); top + 1],
        bd: Vec::new(),
        cof: Vec::new(),
    };
    for d in 0..=top {
        let mut s = vec![0u8; cx.count(d)];
        if d > 0 {
            for (x, slot) in s.iter_mut().enumerate() {
                cx.boundary(d, x, &mut e.bd);
                assert!(e.bd.len() <= COUNT as usize, "boundary too large for the reduction engine");
                *slot = e.bd.len() as u8;
            }
        }
        e.zero[d] = s.iter().enumerate().filter(|(_, &v)| v == 0).map(|(x, _)| x as u32).collect();
        e.state.push(s);
        e.time.push(vec![0u32; cx.count(d)]);
    }
    for d in 1..=top {
        for x in 0..e.state[d].len() {
            if e.state[d][x] == 1 {
                e.state[d][x] |= QUEUED;
                e.queue.push_back((d as u8, x as u32));
            }
        }
    }
    let mut critical: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    loop {
        e.drain();
        let Some((d, x)) = e.next_critical() else { break };
        let stamp = e.tick();
        e.kill(d, x, CRITICAL, stamp);
        critical[d].push(x);
    }
    for c in &mut critical {
        c.sort_unstable();
    }
    let position = |list: &[usize], x: usize| list.binary_search(&x).expect("critical cell");
    let survivors: Vec<usize> = critical.iter().map(Vec::len).collect();
    let mut matrices = vec![SparseMatrix::zero(0, survivors[0])];
    for d in 1..=top {
        let (lower, upper) = (&critical[d - 1], &critical[d]);
        let mut columns: Vec<Vec<(usize, i64)>> = Vec::new();
        if lower.len() < upper.len() {
            let mut by_column: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
            for (row, &r) in lower.iter().enumerate() {
                for (z, c) in e.coflow(d, r) {
                    by_column.entry(z).or_default().push((row, c));
                }
            }
            columns.extend(by_column.into_values());
        } else {
            for &x in upper {
                let mut col: Vec<(usize, i64)> = e.flow(d, x).into_iter().map(|(y, c)| (position(lower, y), c)).collect();
                if !col.is_empty() {
                    col.sort_unstable();
                    columns.push(col);
                }
            }
        }
        matrices.push(SparseMatrix::from_columns(survivors[d - 1], columns, ring));
    }
    Reduced { ring, survivors, matrices }
}

/// One homology or cohomology group: free rank plus torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub ring: Ring,
    /// False when the truncation can change this degree.
    pub trusted: bool,
}

impl HomologyGroup {
    pub fn is_free_of_rank(&self, r: usize) -> bool {
        self.rank == r && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "degree": self.degree,
            "rank": self.rank,
            "torsion": self.torsion.iter().map(bigint_json).collect::<Vec<_>>(),
            "trusted": self.trusted,
            "group": self.to_string(),
        })
    }
}

/// JSON number when it fits in 64 bits, string otherwise.
pub fn bigint_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(v.to_string()),
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let base = self.ring.to_string();
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(base.clone()),
            r => parts.push(format!("{base}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variance {
    Homology,
    Cohomology,
}

/// Groups in degrees `0..=last` from a reduced complex whose survivors
/// include dimension `last + 1` when available.
fn groups_from(r: &Reduced, last: usize, variance: Variance, trusted: impl Fn(usize) -> bool) -> Vec<HomologyGroup> {
    let top = r.matrices.len() - 1;
    let forms: Vec<_> = (0..=top)
        .map(|d| match variance {
            Variance::Homology => smith_in(&r.matrices[d], r.ring),
            Variance::Cohomology => smith_in(&r.matrices[d].transpose(), r.ring),
        })
        .collect();
    (0..=last.min(top))
        .map(|n| {
            let out_rank = forms[n].rank;
            let (in_rank, torsion) = match variance {
                Variance::Homology => match forms.get(n + 1) {
                    Some(f) => (f.rank, f.torsion()),
                    None => (0, Vec::new()),
                },
                Variance::Cohomology => (forms[n].rank, forms[n].torsion()),
            };
            let next_rank = forms.get(n + 1).map_or(0, |f| f.rank);
            let rank = match variance {
                Variance::Homology => r.survivors[n] - out_rank - in_rank,
                Variance::Cohomology => r.survivors[n] - next_rank - in_rank,
            };
            HomologyGroup { degree: n, rank, torsion, ring: r.ring, trusted: trusted(n) }
        })
        .collect()
}

/// Homology of a chain complex in every degree; degrees beyond the
/// trustworthy bound are computed but flagged.
pub fn homology(k: &ChainComplex) -> Vec<HomologyGroup> {
    homology_upto(k, k.max_dim())
}

/// Homology in degrees `0..=last`.
pub fn homology_upto(k: &ChainComplex, last: usize) -> Vec<HomologyGroup> {
    let ix = IndexedComplex::new(k);
    let top = (last + 1).min(k.max_dim());
    let r = reduce(&ix, k.ring(), top);
    let complete = top == k.max_dim();
    groups_from(&r, last, Variance::Homology, |n| k.is_trusted(n) && (complete || n < top))
}

/// Cohomology of a chain complex, computed from the transposed boundaries.
pub fn cohomology(k: &ChainComplex) -> Vec<HomologyGroup> {
    let ix = IndexedComplex::new(k);
    let r = reduce(&ix, k.ring(), k.max_dim());
    groups_from(&r, k.max_dim(), Variance::Cohomology, |n| k.is_trusted(n))
}

/// Homology of any [`CellComplex`] in degrees `0..=last`, all treated as trusted
/// when the complex is complete through dimension `last + 1`.
pub fn homology_of<C: CellComplex>(cx: &C, ring: Ring, last: usize) -> Vec<HomologyGroup> {
    let top = (last + 1).min(cx.max_dim());
    let r = reduce(cx, ring, top);
    groups_from(&r, last, Variance::Homology, |n| n < top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cube_set, rack_space, trivial_set, Rack, DEFAULT_CELL_CAP};

    fn h(c: &crate::square::SquareSet, ring: Ring) -> Vec<HomologyGroup> {
        homology(&ChainComplex::from_square_set(c, ring).unwrap())
    }

    #[test]
    fn cube_is_a_point() {
        for n in 0..5 {
            let g = h(&cube_set(n), Ring::Z);
            assert!(g[0].is_free_of_rank(1));
            assert!(g[1..].iter().all(|x| x.is_free_of_rank(0) && x.trusted));
        }
    }

    #[test]
    fn trivial_set_has_one_class_per_degree() {
        let g = h(&trivial_set(6), Ring::Z);
        for (n, x) in g.iter().enumerate() {
            assert!(x.is_free_of_rank(1));
            assert_eq!(x.trusted, n <= 5);
        }
    }

    #[test]
    fn rack_spot_values() {
        let b = rack_space(&Rack::cyclic(2).unwrap(), 4, DEFAULT_CELL_CAP).unwrap();
        let g = h(&b, Ring::Z);
        assert!(g[0].is_free_of_rank(1));
        assert!(g[1].is_free_of_rank(1));
        let t = rack_space(&Rack::trivial(2).unwrap(), 4, DEFAULT_CELL_CAP).unwrap();
        let g = h(&t, Ring::Z);
        for n in 0..4 {
            assert!(g[n].is_free_of_rank(1 << n));
        }
    }

    /// Projective plane as a Δ-style chain complex: H_1 = Z/2, H_2 = 0.
    fn projective_plane() -> ChainComplex {
        // one vertex, one edge a, one 2-cell with boundary 2a
        let d1 = SparseMatrix::from_triplets(1, 1, &[], Ring::Z);
        let d2 = SparseMatrix::from_triplets(1, 1, &[(0, 0, 2)], Ring::Z);
        ChainComplex::new(Ring::Z, vec![SparseMatrix::zero(0, 1), d1, d2], Some(usize::MAX)).unwrap()
    }

    #[test]
    fn torsion_and_cohomology() {
        let k = projective_plane();
        let g = homology(&k);
        assert_eq!(g[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(g[1].rank, 0);
        assert!(g[2].is_free_of_rank(0));
        let c = cohomology(&k);
        assert!(c[0].is_free_of_rank(1));
        assert!(c[1].is_free_of_rank(0));
        assert_eq!(c[2].torsion, vec![BigInt::from(2)]);
        assert_eq!(g[1].to_string(), "Z/2");
    }

    #[test]
    fn mod2_coefficients() {
        let k = projective_plane();
        let k2 = ChainComplex::new(
            Ring::Z2,
            vec![SparseMatrix::zero(0, 1), k.boundary(1).clone(), SparseMatrix::from_triplets(1, 1, &[(0, 0, 2)], Ring::Z2)],
            Some(usize::MAX),
        )
        .unwrap();
        let g = homology(&k2);
        assert!(g.iter().all(|x| x.is_free_of_rank(1)));
    }

    #[test]
    fn reduction_matches_plain_snf() {
        let b = rack_space(&Rack::core(&crate::constructions::Group::symmetric3()), 3, DEFAULT_CELL_CAP).unwrap();
        let k = ChainComplex::from_square_set(&b, Ring::Z).unwrap();
        let g = homology(&k);
        for n in 0..=2 {
            let out = smith_in(k.boundary(n), Ring::Z);
            let inc = smith_in(k.boundary(n + 1), Ring::Z);
            assert_eq!(g[n].rank, k.rank(n) - out.rank - inc.rank, "degree {n}");
            assert_eq!(g[n].torsion, inc.torsion());
        }
    }
}
