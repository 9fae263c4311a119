//! Finite racks and the groups they are built from.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// A finite group given by its multiplication table, `mul[a][b] = ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    size: usize,
    mul: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Vec<String>,
}

impl Group {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Group> {
        let size = table.len();
        if size == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        let mut mul = Vec::with_capacity(size * size);
        for (a, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(Error::InvalidGroup(format!("{a}*{b} = {v} is not an element")));
                }
                mul.push(v as u32);
            }
        }
        let m = |a: usize, b: usize| mul[a * size + b] as usize;
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..size)
            .find(|&e| (0..size).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(size);
        for a in 0..size {
            let inv = (0..size)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv as u32);
        }
        let labels = match labels {
            Some(l) if l.len() == size => l,
            Some(_) => return Err(Error::InvalidGroup("label count does not match size".into())),
            None => (0..size).map(|a| a.to_string()).collect(),
        };
        Ok(Group { size, mul, identity, inverse, labels })
    }

    /// The cyclic group `Z_n` under addition.
    pub fn cyclic(n: usize) -> Result<Group> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(&table, None)
    }

    /// The symmetric group on three letters; elements are permutations in
    /// lexicographic order of their one-line notation, `(ab)(x) = a(b(x))`.
    pub fn symmetric3() -> Group {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let labels = perms.iter().map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1)).collect();
        Group::from_table(&table, Some(labels)).expect("S_3 table is a group")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn from_json(text: &str) -> Result<Group> {
        let raw: GroupJson = serde_json::from_str(text)?;
        Group::from_table(&raw.mul, raw.elements.map(|e| e.iter().map(value_label).collect()))
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = GroupJson {
            elements: Some(self.labels.iter().map(|l| Value::String(l.clone())).collect()),
            mul: (0..self.size).map(|a| (0..self.size).map(|b| self.mul(a, b)).collect()).collect(),
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }
}

/// Why a table is not a rack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RackDefect {
    /// `a1^b = a2^b` with `a1 != a2`.
    NotBijective { b: usize, a1: usize, a2: usize },
    /// `(a^b)^c != (a^c)^(b^c)`.
    IdentityFails { a: usize, b: usize, c: usize },
    /// Non-square table or an entry that is not an element.
    Shape(String),
}

impl std::fmt::Display for RackDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RackDefect::NotBijective { b, a1, a2 } => {
                write!(f, "a -> a^{b} is not a bijection: {a1}^{b} = {a2}^{b}")
            }
            RackDefect::IdentityFails { a, b, c } => {
                write!(f, "rack identity fails for (a, b, c) = ({a}, {b}, {c})")
            }
            RackDefect::Shape(s) => write!(f, "{s}"),
        }
    }
}

/// A finite rack: `a^b` bijective in `a`, and `a^{bc} = a^{c b^c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rack {
    size: usize,
    op: Vec<u32>,
    labels: Vec<String>,
}

impl Rack {
    /// Finds the first defect of a candidate table `op[a][b] = a^b`, if any.
    pub fn check_table(table: &[Vec<usize>]) -> Option<RackDefect> {
        let size = table.len();
        if size == 0 {
            return Some(RackDefect::Shape("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != size {
                return Some(RackDefect::Shape(format!("row {a} has length {}", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= size) {
                return Some(RackDefect::Shape(format!("entry {v} in row {a} is not an element")));
            }
        }
        for b in 0..size {
            let mut seen = vec![usize::MAX; size];
            for a in 0..size {
                let v = table[a][b];
                if seen[v] != usize::MAX {
                    return Some(RackDefect::NotBijective { b, a1: seen[v], a2: a });
                }
                seen[v] = a;
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if table[table[a][b]][c] != table[table[a][c]][table[b][c]] {
                        return Some(RackDefect::IdentityFails { a, b, c });
                    }
                }
            }
        }
        None
    }

    pub fn from_table(table: &[Vec<usize>]) -> Result<Rack> {
        Rack::from_table_with_labels(table, None)
    }

    pub fn from_table_with_labels(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Rack> {
        if let Some(defect) = Rack::check_table(table) {
            return Err(Error::InvalidRack(defect.to_string()));
        }
        let size = table.len();
        let labels = match labels {
            Some(l) if l.len() == size => l,
            Some(_) => return Err(Error::InvalidRack("label count does not match size".into())),
            None => (0..size).map(|a| a.to_string()).collect(),
        };
        let op = table.iter().flat_map(|row| row.iter().map(|&v| v as u32)).collect();
        Ok(Rack { size, op, labels })
    }

    /// `a^b := b^{-1} a b`.
    pub fn conjugation(g: &Group) -> Rack {
        let table: Vec<Vec<usize>> = (0..g.size())
            .map(|a| (0..g.size()).map(|b| g.mul(g.mul(g.inv(b), a), b)).collect())
            .collect();
        Rack::from_table_with_labels(&table, Some(g.labels().to_vec())).expect("conjugation is a rack")
    }

    /// The core of a group, `a^b := b a^{-1} b`.
    pub fn core(g: &Group) -> Rack {
        let table: Vec<Vec<usize>> = (0..g.size())
            .map(|a| (0..g.size()).map(|b| g.mul(g.mul(b, g.inv(a)), b)).collect())
            .collect();
        Rack::from_table_with_labels(&table, Some(g.labels().to_vec())).expect("the core is a rack")
    }

    /// `a^b := a + 1 mod n`.
    pub fn cyclic(n: usize) -> Result<Rack> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| vec![(a + 1) % n; n]).collect();
        Rack::from_table(&table)
    }

    /// `a^b := a`.
    pub fn trivial(n: usize) -> Result<Rack> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| vec![a; n]).collect();
        Rack::from_table(&table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `a^b`.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.size + b] as usize
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.size).map(|a| (0..self.size).map(|b| self.op(a, b)).collect()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.op(a, b) == a))
    }

    /// Whether `f` (element images) is a rack homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &Rack, f: &[usize]) -> bool {
        f.len() == self.size
            && f.iter().all(|&v| v < target.size)
            && (0..self.size)
                .all(|a| (0..self.size).all(|b| f[self.op(a, b)] == target.op(f[a], f[b])))
    }

    pub fn from_json(text: &str) -> Result<Rack> {
        let raw: RackJson = serde_json::from_str(text)?;
        Rack::from_table_with_labels(&raw.op, raw.elements.map(|e| e.iter().map(value_label).collect()))
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = RackJson {
            elements: Some(self.labels.iter().map(|l| Value::String(l.clone())).collect()),
            op: self.table(),
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }
}

fn value_label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
struct RackJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Value>>,
    op: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Value>>,
    mul: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force rack axioms on a closure, independent of `check_table`.
    fn is_rack(n: usize, op: impl Fn(usize, usize) -> usize) -> bool {
        let bij = (0..n).all(|b| {
            let mut img: Vec<usize> = (0..n).map(|a| op(a, b)).collect();
            img.sort();
            img.dedup();
            img.len() == n
        });
        let ident = (0..n)
            .all(|a| (0..n).all(|b| (0..n).all(|c| op(op(a, b), c) == op(op(a, c), op(b, c)))));
        bij && ident
    }

    #[test]
    fn s3_conjugation_is_a_rack() {
        let g = Group::symmetric3();
        assert_eq!(g.size(), 6);
        assert!(!g.is_abelian());
        let r = Rack::conjugation(&g);
        assert!(is_rack(6, |a, b| r.op(a, b)));
        assert!(!r.is_trivial());
        let core = Rack::core(&g);
        assert!(is_rack(6, |a, b| core.op(a, b)));
    }

    #[test]
    fn cyclic_racks() {
        for n in 1..6 {
            let r = Rack::cyclic(n).unwrap();
            assert!(is_rack(n, |a, b| r.op(a, b)));
        }
        assert_eq!(Rack::cyclic(1).unwrap(), Rack::trivial(1).unwrap());
    }

    #[test]
    fn core_of_z3() {
        let r = Rack::core(&Group::cyclic(3).unwrap());
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(r.op(a, b), (2 * b + 3 - a) % 3);
            }
        }
    }

    #[test]
    fn conjugation_in_abelian_group_is_trivial() {
        for n in 1..5 {
            let r = Rack::conjugation(&Group::cyclic(n).unwrap());
            assert_eq!(r.table(), Rack::trivial(n).unwrap().table());
        }
    }

    #[test]
    fn defects_carry_witnesses() {
        let bad_col = vec![vec![0, 0], vec![0, 1]];
        assert_eq!(Rack::check_table(&bad_col), Some(RackDefect::NotBijective { b: 0, a1: 0, a2: 1 }));
        assert!(Rack::from_table(&bad_col).is_err());
        // bijective columns but no rack identity: a^b = a + b mod 3
        let shift: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        assert!(!is_rack(3, |a, b| (a + b) % 3));
        match Rack::check_table(&shift) {
            Some(RackDefect::IdentityFails { a, b, c }) => {
                assert_ne!(shift[shift[a][b]][c], shift[shift[a][c]][shift[b][c]]);
            }
            other => panic!("expected identity failure, got {other:?}"),
        }
        assert!(matches!(Rack::check_table(&[vec![0, 1]]), Some(RackDefect::Shape(_))));
    }

    #[test]
    fn group_validation() {
        assert!(Group::from_table(&[vec![0, 1], vec![1, 1]], None).is_err());
        assert!(Group::from_table(&[vec![0, 1], vec![1, 0]], None).is_ok());
        // a semigroup with identity but no inverses
        assert!(Group::from_table(&[vec![0, 1], vec![1, 1]], None).is_err());
    }

    #[test]
    fn json_round_trips() {
        let r = Rack::conjugation(&Group::symmetric3());
        assert_eq!(Rack::from_json(&r.to_json().unwrap()).unwrap(), r);
        let g = Group::symmetric3();
        assert_eq!(Group::from_json(&g.to_json().unwrap()).unwrap(), g);
        let numeric = Rack::from_json(r#"{"elements":[0,1],"op":[[1,1],[0,0]]}"#).unwrap();
        assert_eq!(numeric.labels(), &["0".to_string(), "1".to_string()]);
    }

    #[test]
    fn homomorphisms() {
        let t2 = Rack::trivial(2).unwrap();
        let t1 = Rack::trivial(1).unwrap();
        assert!(t2.is_homomorphism(&t1, &[0, 0]));
        let c2 = Rack::cyclic(2).unwrap();
        assert!(!t2.is_homomorphism(&c2, &[0, 1]));
        assert!(c2.is_homomorphism(&t1, &[0, 0]));
    }
}
