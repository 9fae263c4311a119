//! `Sd_Δ(T)` for the trivial □-set `T`, walked without materializing faces.
//!
//! Simplices follow the same indexing as [`crate::subdivision::sd_delta`]
//! applied to `trivial_set(n_max)`, truncated at simplicial dimension `top`.

use crate::algebra::chain::Ring;
use crate::algebra::homology::CellComplex;
use crate::error::{Error, Result};
use crate::face::combinations;

const MAX_N: usize = 12;
const DENSE_LIMIT: u128 = 1 << 26;
const INVALID: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Cell {
    n: usize,
    k: usize,
    levels: [u8; MAX_N],
    eps: [u8; MAX_N],
}

/// The simplices of `Sd_Δ(trivial_set(n_max))` of dimension `<= top`.
pub struct TrivialSubdivision {
    n_max: usize,
    top: usize,
    ring: Ring,
    counts: Vec<usize>,
    block_start: Vec<Vec<usize>>,
    /// `[k][n][code]`: offset of a level pattern inside its block.
    offsets: Vec<Vec<Vec<u32>>>,
    /// `[k][n]`: `(offset, code)` of the valid patterns, increasing.
    patterns: Vec<Vec<Vec<(u32, u32)>>>,
}

impl TrivialSubdivision {
    pub fn new(n_max: usize, top: usize, ring: Ring) -> Result<TrivialSubdivision> {
        let top = top.min(n_max);
        if n_max > MAX_N {
            return Err(Error::DimensionMismatch(format!("n_max {n_max} above {MAX_N}")));
        }
        let dense: u128 = (0..=top).map(|k| ((k + 1) as u128).pow(n_max as u32)).sum();
        if dense > DENSE_LIMIT {
            return Err(Error::TooLarge { estimated: dense, cap: DENSE_LIMIT });
        }
        let mut counts = vec![0usize; top + 1];
        let mut block_start = vec![vec![0usize; n_max + 1]; top + 1];
        let mut offsets = vec![vec![Vec::new(); n_max + 1]; top + 1];
        let mut patterns = vec![vec![Vec::new(); n_max + 1]; top + 1];
        for k in 0..=top {
            for n in k..=n_max {
                block_start[k][n] = counts[k];
                let codes = (k + 1).pow(n as u32);
                let mut table = vec![INVALID; codes];
                let mut list = Vec::new();
                let mut off: usize = 0;
                for (code, slot) in table.iter_mut().enumerate() {
                    let mut used = 0u32;
                    let mut nonzero = 0;
                    let mut c = code;
                    for _ in 0..n {
                        let l = c % (k + 1);
                        c /= k + 1;
                        used |= 1 << l;
                        nonzero += usize::from(l > 0);
                    }
                    let want = ((1u32 << (k + 1)) - 1) & !1;
                    if used & want == want {
                        *slot = off as u32;
                        list.push((off as u32, code as u32));
                        off += 1 << nonzero;
                    }
                }
                counts[k] += off;
                offsets[k][n] = table;
                patterns[k][n] = list;
            }
        }
        Ok(TrivialSubdivision { n_max, top, ring, counts, block_start, offsets, patterns })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    fn decode(&self, k: usize, idx: usize) -> Cell {
        let n = (k..=self.n_max).rev().find(|&n| self.block_start[k][n] <= idx && !self.patterns[k][n].is_empty()).unwrap();
        let off = (idx - self.block_start[k][n]) as u32;
        let list = &self.patterns[k][n];
        let pos = list.partition_point(|&(o, _)| o <= off) - 1;
        let (start, code) = list[pos];
        let mut cell = Cell { n, k, levels: [0; MAX_N], eps: [0; MAX_N] };
        let mut c = code as usize;
        for p in (0..n).rev() {
            cell.levels[p] = (c % (k + 1)) as u8;
            c /= k + 1;
        }
        let nonzero = cell.levels[..n].iter().filter(|&&l| l > 0).count();
        let bits = off - start;
        let mut t = 0;
        for p in 0..n {
            if cell.levels[p] > 0 {
                cell.eps[p] = ((bits >> (nonzero - 1 - t)) & 1) as u8;
                t += 1;
            }
        }
        cell
    }

    fn index(&self, cell: &Cell) -> usize {
        let (n, k) = (cell.n, cell.k);
        let mut code = 0usize;
        let mut bits = 0usize;
        for p in 0..n {
            let l = cell.levels[p];
            code = code * (k + 1) + l as usize;
            if l > 0 {
                bits = 2 * bits + cell.eps[p] as usize;
            }
        }
        let off = self.offsets[k][n][code];
        debug_assert_ne!(off, INVALID);
        self.block_start[k][n] + off as usize + bits
    }

    fn sign(&self, i: usize) -> i64 {
        self.ring.reduce(if i % 2 == 0 { 1 } else { -1 })
    }
}

impl CellComplex for TrivialSubdivision {
    fn max_dim(&self) -> usize {
        self.top
    }

    fn count(&self, d: usize) -> usize {
        self.counts.get(d).copied().unwrap_or(0)
    }

    fn boundary(&self, d: usize, x: usize, out: &mut Vec<(usize, i64)>) {
        out.clear();
        if d == 0 {
            return;
        }
        let c = self.decode(d, x);
        let k = d as u8;
        for i in 0..=d {
            let mut f = Cell { n: c.n, k: d - 1, levels: [0; MAX_N], eps: [0; MAX_N] };
            if i == d {
                let mut m = 0;
                for p in 0..c.n {
                    if c.levels[p] != k {
                        f.levels[m] = c.levels[p];
                        f.eps[m] = c.eps[p];
                        m += 1;
                    }
                }
                f.n = m;
            } else {
                for p in 0..c.n {
                    let l = c.levels[p];
                    if i == 0 {
                        f.levels[p] = l.saturating_sub(1);
                        f.eps[p] = if l > 1 { c.eps[p] } else { 0 };
                    } else {
                        f.levels[p] = if l as usize > i { l - 1 } else { l };
                        f.eps[p] = c.eps[p];
                    }
                }
            }
            out.push((self.index(&f), self.sign(i)));
        }
    }

    fn cofaces(&self, d: usize, x: usize, out: &mut Vec<usize>) {
        out.clear();
        if d >= self.top {
            return;
        }
        let c = self.decode(d, x);
        let n = c.n;
        let k = d as u8;
        // a new bottom face F_0 inside the old one
        let free: Vec<usize> = (0..n).filter(|&p| c.levels[p] == 0).collect();
        let mut up = c;
        up.k = d + 1;
        for p in 0..n {
            if c.levels[p] > 0 {
                up.levels[p] = c.levels[p] + 1;
            }
        }
        let choices = 3usize.pow(free.len() as u32);
        for mut t in 1..choices {
            let mut y = up;
            for &p in &free {
                let v = t % 3;
                t /= 3;
                y.levels[p] = u8::from(v > 0);
                y.eps[p] = u8::from(v == 2);
            }
            out.push(self.index(&y));
        }
        // split a level j into j and j + 1
        for j in 1..=k {
            let members: Vec<usize> = (0..n).filter(|&p| c.levels[p] == j).collect();
            if members.len() < 2 {
                continue;
            }
            let mut base = c;
            base.k = d + 1;
            for p in 0..n {
                if c.levels[p] > j {
                    base.levels[p] = c.levels[p] + 1;
                }
            }
            for mask in 1..(1usize << members.len()) - 1 {
                let mut y = base;
                for (t, &p) in members.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        y.levels[p] = j + 1;
                    }
                }
                out.push(self.index(&y));
            }
        }
        // a new top cube containing the old one as a face
        for m in 1..=self.n_max - n {
            for pos in combinations(n + m, m) {
                for bits in 0..1usize << m {
                    let mut y = Cell { n: n + m, k: d + 1, levels: [0; MAX_N], eps: [0; MAX_N] };
                    let (mut src, mut t) = (0, 0);
                    for q in 0..n + m {
                        if t < m && pos[t] == q + 1 {
                            y.levels[q] = k + 1;
                            y.eps[q] = (bits >> (m - 1 - t) & 1) as u8;
                            t += 1;
                        } else {
                            y.levels[q] = c.levels[src];
                            y.eps[q] = c.eps[src];
                            src += 1;
                        }
                    }
                    out.push(self.index(&y));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::homology::homology_of;
    use crate::constructions::{trivial_set, DEFAULT_CELL_CAP};
    use crate::subdivision::sd_delta::sd_delta;

    #[test]
    fn agrees_with_explicit_subdivision() {
        for n_max in 0..=4 {
            let explicit = sd_delta(&trivial_set(n_max), DEFAULT_CELL_CAP).unwrap().set;
            let imp = TrivialSubdivision::new(n_max, n_max, Ring::Z).unwrap();
            assert_eq!(imp.counts(), explicit.cell_counts());
            let mut bd = Vec::new();
            let mut cof = Vec::new();
            for k in 0..=n_max {
                let mut transpose: Vec<Vec<usize>> = vec![Vec::new(); imp.count(k)];
                if k < n_max {
                    for y in 0..imp.count(k + 1) {
                        for i in 0..=k + 1 {
                            transpose[explicit.face(k + 1, y, i)].push(y);
                        }
                    }
                }
                for x in 0..imp.count(k) {
                    imp.boundary(k, x, &mut bd);
                    let want: Vec<(usize, i64)> = (0..=k)
                        .filter(|_| k > 0)
                        .map(|i| (explicit.face(k, x, i), if i % 2 == 0 { 1 } else { -1 }))
                        .collect();
                    assert_eq!(bd, want);
                    imp.cofaces(k, x, &mut cof);
                    cof.sort_unstable();
                    transpose[x].sort_unstable();
                    assert_eq!(cof, transpose[x], "k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn small_homology() {
        let imp = TrivialSubdivision::new(5, 5, Ring::Z).unwrap();
        for g in homology_of(&imp, Ring::Z, 4) {
            assert!(g.is_free_of_rank(1), "{g}");
        }
    }
}
