use std::collections::HashMap;
use std::sync::Arc;

use crate::constructions::rack::Rack;
use crate::constructions::{check_cap, LABEL_LIMIT};
use crate::error::{Error, Result};
use crate::face::{enumerate_face_words, FaceWord};
use crate::square::{SquareMap, SquareSet};

/// The trivial □-set `T`, one cell `c_n` in each dimension, truncated at `max_dim`.
pub fn trivial_set(max_dim: usize) -> SquareSet {
    let counts = vec![1; max_dim + 1];
    let faces = (0..=max_dim).map(|n| vec![0u32; 2 * n]).collect();
    SquareSet::new(counts, faces, None, true).expect("trivial set is well formed")
}

/// The □-set of all faces of `I^n`. Cells of dimension `p` follow the order
/// of [`enumerate_face_words`]; labels are patterns such as `0*1`.
pub fn cube_set(n: usize) -> SquareSet {
    let words: Vec<Vec<FaceWord>> = (0..=n).map(|p| enumerate_face_words(p, n)).collect();
    let index: Vec<HashMap<&FaceWord, u32>> = words
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(k, w)| (w, k as u32)).collect())
        .collect();
    let mut faces = vec![Vec::new()];
    for p in 1..=n {
        let mut table = Vec::with_capacity(2 * p * words[p].len());
        for w in &words[p] {
            for i in 1..=p {
                for eps in 0..2u8 {
                    let delta = FaceWord::first_order(p, i, eps).expect("valid first-order face");
                    let face = w.compose(&delta).expect("composable");
                    table.push(index[p - 1][&face]);
                }
            }
        }
        faces.push(table);
    }
    let labels = words
        .iter()
        .map(|ws| ws.iter().map(pattern_label).collect())
        .collect();
    let counts = words.iter().map(Vec::len).collect();
    SquareSet::new(counts, faces, Some(labels), false).expect("cube set is well formed")
}

fn pattern_label(w: &FaceWord) -> String {
    w.pattern()
        .iter()
        .map(|c| match c {
            None => '*',
            Some(0) => '0',
            Some(_) => '1',
        })
        .collect()
}

/// Cell counts `|R|^n` of the rack space up to `max_dim`, without building it.
pub fn estimate_rack_space(rack_size: usize, max_dim: usize) -> Vec<u128> {
    (0..=max_dim).map(|n| (rack_size as u128).saturating_pow(n as u32)).collect()
}

/// Decodes a rack-space cell index into its tuple `(x_1, ..., x_n)`;
/// indices are mixed radix with `x_1` least significant.
pub fn rack_tuple(rack_size: usize, n: usize, mut index: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(index % rack_size);
        index /= rack_size;
    }
    out
}

/// Inverse of [`rack_tuple`].
pub fn rack_index(rack_size: usize, tuple: &[usize]) -> usize {
    tuple.iter().rev().fold(0, |acc, &x| acc * rack_size + x)
}

/// The rack space `BR` truncated at `max_dim`.
///
/// `∂_i^0` deletes `x_i`; `∂_i^1` deletes `x_i` and replaces each earlier
/// `x_j` by `x_j^{x_i}`. Labels hold the tuples when the set is small.
pub fn rack_space(rack: &Rack, max_dim: usize, cap: u128) -> Result<SquareSet> {
    let est = estimate_rack_space(rack.size(), max_dim);
    check_cap(&est, cap)?;
    let r = rack.size();
    let counts: Vec<usize> = est.iter().map(|&c| c as usize).collect();
    let mut faces = vec![Vec::new()];
    let mut digits = Vec::new();
    let mut rest = Vec::new();
    for n in 1..=max_dim {
        let mut table = Vec::with_capacity(2 * n * counts[n]);
        for x in 0..counts[n] {
            digits.clear();
            digits.extend(rack_tuple(r, n, x));
            for i in 1..=n {
                rest.clear();
                rest.extend(digits.iter().enumerate().filter(|&(j, _)| j != i - 1).map(|(_, &d)| d));
                table.push(rack_index(r, &rest) as u32);
                let xi = digits[i - 1];
                for d in rest.iter_mut().take(i - 1) {
                    *d = rack.op(*d, xi);
                }
                table.push(rack_index(r, &rest) as u32);
            }
        }
        faces.push(table);
    }
    let labels = (est.iter().sum::<u128>() <= LABEL_LIMIT).then(|| {
        counts
            .iter()
            .enumerate()
            .map(|(n, &m)| {
                (0..m)
                    .map(|x| {
                        let parts: Vec<&str> =
                            rack_tuple(r, n, x).iter().map(|&a| rack.labels()[a].as_str()).collect();
                        format!("({})", parts.join(","))
                    })
                    .collect()
            })
            .collect()
    });
    SquareSet::new(counts, faces, labels, true)
}

/// The unique map `t_C: C → T` into the trivial set of the same truncation.
pub fn terminal_map(c: Arc<SquareSet>) -> SquareMap {
    let target = Arc::new(trivial_set(c.max_dim()));
    let levels = c.cell_counts().iter().map(|&m| vec![0u32; m]).collect();
    SquareMap::new(c, target, levels).expect("terminal map is well formed")
}

/// The □-map `BR → BS` induced by a rack homomorphism `f: R → S`, applied
/// coordinatewise.
pub fn induced_rack_map(
    source: Arc<SquareSet>,
    source_rack: &Rack,
    target: Arc<SquareSet>,
    target_rack: &Rack,
    f: &[usize],
) -> Result<SquareMap> {
    if !source_rack.is_homomorphism(target_rack, f) {
        return Err(Error::InvalidMap("element map is not a rack homomorphism".into()));
    }
    let (r, s) = (source_rack.size(), target_rack.size());
    let levels = source
        .cell_counts()
        .iter()
        .enumerate()
        .map(|(n, &m)| {
            (0..m)
                .map(|x| {
                    let t: Vec<usize> = rack_tuple(r, n, x).into_iter().map(|a| f[a]).collect();
                    rack_index(s, &t) as u32
                })
                .collect()
        })
        .collect();
    SquareMap::new(source, target, levels)
}
