use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::Value;

use crate::algebra::chain::Ring;
use crate::algebra::cochain::Cochain;
use crate::algebra::homology::bigint_json;
use crate::error::{Error, Result};
use crate::square::SquareSet;

/// A family `V_0, ..., V_N` of integer cochains, read in `Z` or in `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassilievFunction {
    levels: Vec<Cochain>,
    modulus: Option<u64>,
}

/// A cell `x` and a direction `i` where `V_n(x) != V_{n-1}(∂_i^1 x) - V_{n-1}(∂_i^0 x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassilievViolation {
    pub degree: usize,
    pub cell: usize,
    pub direction: usize,
    pub expected: BigInt,
    pub found: BigInt,
}

/// Outcome of extending `V_{n-1}` to degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Extended(Cochain),
    /// Directions `i < j` of the `n`-cell `cell` give different differences.
    Inconsistent { degree: usize, cell: usize, i: usize, j: usize, value_i: BigInt, value_j: BigInt },
}

impl VassilievFunction {
    /// `modulus` of `None` or `Some(0)` means integer values; `Some(1)` is rejected.
    pub fn new(levels: Vec<Cochain>, modulus: Option<u64>) -> Result<VassilievFunction> {
        let modulus = modulus.filter(|&m| m != 0);
        if modulus == Some(1) {
            return Err(Error::Malformed("modulus must be 0 or at least 2".into()));
        }
        for (n, v) in levels.iter().enumerate() {
            if v.degree() != n {
                return Err(Error::Malformed(format!("level {n} holds a cochain of degree {}", v.degree())));
            }
        }
        Ok(VassilievFunction { levels, modulus })
    }

    pub fn levels(&self) -> &[Cochain] {
        &self.levels
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn top(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    /// `{"modulus": m|null, "levels": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "modulus": self.modulus,
            "levels": self.levels.iter().map(|c| c.values().iter().map(bigint_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(text: &str) -> Result<VassilievFunction> {
        let v: Value = serde_json::from_str(text)?;
        let modulus = v.get("modulus").and_then(Value::as_u64);
        let levels = v["levels"]
            .as_array()
            .ok_or_else(|| Error::Malformed("missing levels".into()))?
            .iter()
            .enumerate()
            .map(|(n, vals)| {
                let doc = serde_json::json!({"degree": n, "ring": Ring::Z, "values": vals});
                Cochain::from_json(&doc.to_string())
            })
            .collect::<Result<Vec<_>>>()?;
        VassilievFunction::new(levels, modulus)
    }
}

fn reduce(v: BigInt, modulus: Option<u64>) -> BigInt {
    match modulus {
        Some(m) => v.mod_floor(&BigInt::from(m)),
        None => v,
    }
}

fn difference(c: &SquareSet, prev: &Cochain, n: usize, x: usize, i: usize, modulus: Option<u64>) -> BigInt {
    let row = c.face_row(n, x);
    let hi = prev.eval(row[2 * (i - 1) + 1] as usize);
    let lo = prev.eval(row[2 * (i - 1)] as usize);
    reduce(hi - lo, modulus)
}

/// Every `(x, i)` violating the Vassiliev identity, in order of degree, cell, direction.
pub fn vassiliev_check(c: &SquareSet, v: &VassilievFunction) -> Result<Vec<VassilievViolation>> {
    for level in &v.levels {
        level.check_against(c)?;
    }
    let mut out = Vec::new();
    for n in 1..v.levels.len() {
        let (prev, cur) = (&v.levels[n - 1], &v.levels[n]);
        for x in 0..c.cell_count(n) {
            let expected = reduce(cur.eval(x).clone(), v.modulus);
            for i in 1..=n {
                let found = difference(c, prev, n, x, i, v.modulus);
                if found != expected {
                    out.push(VassilievViolation { degree: n, cell: x, direction: i, expected: expected.clone(), found });
                }
            }
        }
    }
    Ok(out)
}

/// `V_n(x) := V_{n-1}(∂_1^1 x) - V_{n-1}(∂_1^0 x)` when every direction agrees.
pub fn vassiliev_extend(c: &SquareSet, prev: &Cochain, modulus: Option<u64>) -> Result<Extension> {
    prev.check_against(c)?;
    let modulus = modulus.filter(|&m| m != 0);
    let n = prev.degree() + 1;
    if n > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() });
    }
    let mut values = Vec::with_capacity(c.cell_count(n));
    for x in 0..c.cell_count(n) {
        let first = difference(c, prev, n, x, 1, modulus);
        for j in 2..=n {
            let other = difference(c, prev, n, x, j, modulus);
            if other != first {
                return Ok(Extension::Inconsistent { degree: n, cell: x, i: 1, j, value_i: first, value_j: other });
            }
        }
        values.push(first);
    }
    Ok(Extension::Extended(Cochain::new(n, prev.ring(), values)))
}

/// Extends `V_0` upward as far as possible; stops at the first inconsistency.
pub fn vassiliev_tower(c: &SquareSet, v0: &Cochain, top: usize, modulus: Option<u64>) -> Result<(VassilievFunction, Option<Extension>)> {
    let mut levels = vec![v0.clone()];
    while levels.len() <= top.min(c.max_dim()) {
        match vassiliev_extend(c, levels.last().unwrap(), modulus)? {
            Extension::Extended(next) => levels.push(next),
            bad => return Ok((VassilievFunction::new(levels, modulus)?, Some(bad))),
        }
    }
    Ok((VassilievFunction::new(levels, modulus)?, None))
}

impl Extension {
    pub fn is_zero(&self) -> bool {
        matches!(self, Extension::Extended(c) if c.values().iter().all(Zero::is_zero))
    }
}
