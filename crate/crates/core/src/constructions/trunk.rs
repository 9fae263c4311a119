use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constructions::rack::Rack;
use crate::constructions::LABEL_LIMIT;
use crate::error::{Error, Result};
use crate::face::{enumerate_face_words, FaceWord};
use crate::square::SquareSet;

/// Vertices, directed edges and preferred squares.
///
/// A square is `[left, right, bottom, top]`: the `x_1 = 0`, `x_1 = 1`,
/// `x_2 = 0` and `x_2 = 1` faces, with direction 1 horizontal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trunk {
    vertex_labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<String>,
    squares: Vec<[usize; 4]>,
}

impl Trunk {
    /// Validates endpoints and corner consistency; repeated squares are dropped.
    pub fn new(
        vertex_labels: Vec<String>,
        edges: Vec<(usize, usize)>,
        edge_labels: Option<Vec<String>>,
        squares: Vec<[usize; 4]>,
    ) -> Result<Trunk> {
        let v = vertex_labels.len();
        for (k, &(s, t)) in edges.iter().enumerate() {
            if s >= v || t >= v {
                return Err(Error::InvalidTrunk(format!("edge {k} has an endpoint outside the vertices")));
            }
        }
        let edge_labels = match edge_labels {
            Some(l) if l.len() == edges.len() => l,
            Some(_) => return Err(Error::InvalidTrunk("edge label count mismatch".into())),
            None => (0..edges.len()).map(|e| e.to_string()).collect(),
        };
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (k, sq) in squares.into_iter().enumerate() {
            if sq.iter().any(|&e| e >= edges.len()) {
                return Err(Error::InvalidTrunk(format!("square {k} uses an unknown edge")));
            }
            let [l, r, b, t] = sq.map(|e| edges[e]);
            if l.0 != b.0 || b.1 != r.0 || l.1 != t.0 || r.1 != t.1 {
                return Err(Error::InvalidTrunk(format!("square {k} has inconsistent corners")));
            }
            if seen.insert(sq) {
                kept.push(sq);
            }
        }
        Ok(Trunk { vertex_labels, edges, edge_labels, squares: kept })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn squares(&self) -> &[[usize; 4]] {
        &self.squares
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn from_json(text: &str) -> Result<Trunk> {
        let raw: TrunkJson = serde_json::from_str(text)?;
        let vertices = match raw.vertices {
            Value::Number(n) => {
                let n = n.as_u64().ok_or_else(|| Error::Malformed("bad vertex count".into()))?;
                (0..n).map(|v| v.to_string()).collect()
            }
            Value::Array(a) => a
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect(),
            _ => return Err(Error::Malformed("vertices must be a count or a list".into())),
        };
        let edges = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Trunk::new(vertices, edges, raw.edge_labels, raw.squares)
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = TrunkJson {
            vertices: Value::Array(self.vertex_labels.iter().map(|l| Value::String(l.clone())).collect()),
            edges: self.edges.iter().map(|&(s, t)| [s, t]).collect(),
            edge_labels: Some(self.edge_labels.clone()),
            squares: self.squares.clone(),
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }
}

#[derive(Serialize, Deserialize)]
struct TrunkJson {
    vertices: Value,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_labels: Option<Vec<String>>,
    squares: Vec<[usize; 4]>,
}

/// The trunk `T(R)`: one vertex, an edge per element and the squares
/// `(b, b, a, a^b)`.
pub fn trunk_of_rack(rack: &Rack) -> Trunk {
    let r = rack.size();
    let mut squares = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            squares.push([b, b, a, rack.op(a, b)]);
        }
    }
    Trunk::new(vec!["*".into()], vec![(0, 0); r], Some(rack.labels().to_vec()), squares)
        .expect("rack trunks are consistent")
}

/// A nerve together with the edge assignment behind every cell.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub set: SquareSet,
    /// `assignments[n][x][e]` is the trunk edge on the `e`-th edge of `I^n`
    /// (in [`cube_edges`] order); empty for `n = 0`.
    pub assignments: Vec<Vec<Vec<u32>>>,
}

impl Nerve {
    /// The edges at the origin in directions `1..=n`.
    pub fn origin_tuple(&self, n: usize, x: usize) -> Vec<usize> {
        let edges = cube_edges(n);
        (1..=n)
            .map(|d| {
                let e = edges
                    .iter()
                    .position(|w| w.kept_positions() == [d] && w.insertions().iter().all(|&(_, c)| c == 0))
                    .expect("origin edge exists");
                self.assignments[n][x][e] as usize
            })
            .collect()
    }
}

/// The edges of `I^n` as face maps `I^1 → I^n`.
pub fn cube_edges(n: usize) -> Vec<FaceWord> {
    if n == 0 {
        Vec::new()
    } else {
        enumerate_face_words(1, n)
    }
}

/// The nerve of a trunk: `n`-cells are edge assignments on `I^n` whose
/// 2-faces all land on preferred squares, enumerated lexicographically.
pub fn trunk_nerve(trunk: &Trunk, max_dim: usize, cap: u128) -> Result<Nerve> {
    let mut counts = vec![trunk.vertex_count()];
    let mut faces: Vec<Vec<u32>> = vec![Vec::new()];
    let mut assignments: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    let mut total = trunk.vertex_count() as u128;
    if max_dim >= 1 {
        let ne = trunk.edges.len();
        counts.push(ne);
        total += ne as u128;
        assignments.push((0..ne as u32).map(|e| vec![e]).collect());
        faces.push(trunk.edges.iter().flat_map(|&(s, t)| [s as u32, t as u32]).collect());
    }
    if total > cap {
        return Err(Error::TooLarge { estimated: total, cap });
    }
    let square_set: HashSet<[u32; 4]> =
        trunk.squares.iter().map(|s| s.map(|e| e as u32)).collect();
    for n in 2..=max_dim {
        let edges = cube_edges(n);
        let edge_index: HashMap<&FaceWord, usize> = edges.iter().enumerate().map(|(k, w)| (w, k)).collect();
        // the four edges of every square of I^n, and which squares complete at each edge
        let mut completes: Vec<Vec<[usize; 4]>> = vec![Vec::new(); edges.len()];
        for sq in enumerate_face_words(2, n) {
            let quad = [(1, 0), (1, 1), (2, 0), (2, 1)].map(|(i, e)| {
                edge_index[&sq.compose(&FaceWord::first_order(2, i, e).unwrap()).unwrap()]
            });
            let last = *quad.iter().max().unwrap();
            completes[last].push(quad);
        }
        let mut cells: Vec<Vec<u32>> = Vec::new();
        let mut current = vec![0u32; edges.len()];
        let ne = trunk.edges.len() as u32;
        // iterative backtracking over positions
        let mut pos = 0usize;
        let mut next = vec![0u32; edges.len() + 1];
        if !edges.is_empty() && ne > 0 {
            loop {
                if pos == edges.len() {
                    cells.push(current.clone());
                    total += 1;
                    if total > cap {
                        return Err(Error::TooLarge { estimated: total, cap });
                    }
                    pos -= 1;
                    continue;
                }
                if next[pos] >= ne {
                    next[pos] = 0;
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    continue;
                }
                current[pos] = next[pos];
                next[pos] += 1;
                let ok = completes[pos].iter().all(|q| square_set.contains(&q.map(|e| current[e])));
                if ok {
                    pos += 1;
                }
            }
        }
        // faces by restriction along δ_i^ε
        let lower_index: HashMap<&[u32], u32> = assignments[n - 1]
            .iter()
            .enumerate()
            .map(|(k, a)| (a.as_slice(), k as u32))
            .collect();
        let lower_edges = cube_edges(n - 1);
        let pull: Vec<Vec<usize>> = (1..=n)
            .flat_map(|i| (0..2u8).map(move |e| (i, e)))
            .map(|(i, e)| {
                let delta = FaceWord::first_order(n, i, e).unwrap();
                lower_edges.iter().map(|w| edge_index[&delta.compose(w).unwrap()]).collect()
            })
            .collect();
        let mut table = Vec::with_capacity(2 * n * cells.len());
        let mut buf = Vec::new();
        for cell in &cells {
            for p in &pull {
                buf.clear();
                buf.extend(p.iter().map(|&e| cell[e]));
                table.push(lower_index[buf.as_slice()]);
            }
        }
        counts.push(cells.len());
        faces.push(table);
        assignments.push(cells);
    }
    let labels = (total <= LABEL_LIMIT).then(|| {
        let mut l = vec![trunk.vertex_labels.clone()];
        for level in assignments.iter().skip(1) {
            l.push(
                level
                    .iter()
                    .map(|a| {
                        let parts: Vec<&str> = a.iter().map(|&e| trunk.edge_labels[e as usize].as_str()).collect();
                        format!("[{}]", parts.join(","))
                    })
                    .collect(),
            );
        }
        l
    });
    let set = SquareSet::new(counts, faces, labels, true)?;
    Ok(Nerve { set, assignments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::rack::Group;
    use crate::constructions::spaces::{rack_index, rack_space, trivial_set};
    use crate::constructions::DEFAULT_CELL_CAP;

    #[test]
    fn rack_trunk_shape() {
        let c2 = Rack::cyclic(2).unwrap();
        let t = trunk_of_rack(&c2);
        assert_eq!(t.edges().len(), 2);
        assert_eq!(t.squares().len(), 4);
        for a in 0..2 {
            for b in 0..2 {
                assert!(t.squares().contains(&[b, b, a, (a + 1) % 2]));
            }
        }
        let one = trunk_of_rack(&Rack::trivial(1).unwrap());
        assert_eq!((one.edges().len(), one.squares().len()), (1, 1));
    }

    #[test]
    fn corner_check() {
        let bad = Trunk::new(
            vec!["u".into(), "v".into()],
            vec![(0, 1), (0, 0)],
            None,
            vec![[0, 1, 1, 1]],
        );
        assert!(matches!(bad, Err(Error::InvalidTrunk(_))));
    }

    #[test]
    fn nerve_without_squares() {
        let t = Trunk::new(vec!["u".into(), "v".into()], vec![(0, 1), (1, 0)], None, vec![]).unwrap();
        let n = trunk_nerve(&t, 4, DEFAULT_CELL_CAP).unwrap();
        assert_eq!(n.set.cell_counts(), &[2, 2, 0, 0, 0]);
        assert!(n.set.validate().is_empty());
    }

    #[test]
    fn single_square_nerve_is_trivial() {
        let t = Trunk::new(vec!["*".into()], vec![(0, 0)], None, vec![[0, 0, 0, 0]]).unwrap();
        let n = trunk_nerve(&t, 5, DEFAULT_CELL_CAP).unwrap();
        let triv = trivial_set(5);
        assert_eq!(n.set.cell_counts(), triv.cell_counts());
        for d in 1..=5 {
            assert_eq!(n.set.face_table(d), triv.face_table(d));
        }
    }

    #[test]
    fn nerve_matches_rack_space() {
        let racks = vec![
            Rack::cyclic(2).unwrap(),
            Rack::cyclic(3).unwrap(),
            Rack::core(&Group::cyclic(3).unwrap()),
            Rack::trivial(2).unwrap(),
        ];
        for r in &racks {
            let nerve = trunk_nerve(&trunk_of_rack(r), 4, DEFAULT_CELL_CAP).unwrap();
            let b = rack_space(r, 4, DEFAULT_CELL_CAP).unwrap();
            assert_eq!(nerve.set.cell_counts(), b.cell_counts());
            assert!(nerve.set.validate().is_empty());
            for n in 1..=4 {
                let phi: Vec<usize> =
                    (0..b.cell_count(n)).map(|x| rack_index(r.size(), &nerve.origin_tuple(n, x))).collect();
                let mut sorted = phi.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), phi.len());
                for x in 0..phi.len() {
                    for i in 1..=n {
                        for e in 0..2 {
                            let lower = nerve.set.face(n, x, i, e);
                            let image = if n == 1 { 0 } else { rack_index(r.size(), &nerve.origin_tuple(n - 1, lower)) };
                            assert_eq!(b.face(n, phi[x], i, e), image);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = trunk_of_rack(&Rack::cyclic(3).unwrap());
        assert_eq!(Trunk::from_json(&t.to_json().unwrap()).unwrap(), t);
        let parsed = Trunk::from_json(r#"{"vertices":1,"edges":[[0,0]],"squares":[[0,0,0,0]]}"#).unwrap();
        assert_eq!(parsed.squares().len(), 1);
    }
}
