use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::algebra::chain::Ring;
use crate::algebra::homology::bigint_json;
use crate::algebra::shuffle::shuffle_sign;
use crate::error::{Error, Result};
use crate::face::combinations;
use crate::square::SquareSet;

/// An integer-valued function on the cells of one degree, over `Z` or `Z/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    ring: Ring,
    values: Vec<BigInt>,
}

impl Cochain {
    pub fn new(degree: usize, ring: Ring, values: Vec<BigInt>) -> Cochain {
        let mut c = Cochain { degree, ring, values };
        c.normalize();
        c
    }

    pub fn zero(c: &SquareSet, degree: usize, ring: Ring) -> Cochain {
        Cochain { degree, ring, values: vec![BigInt::zero(); c.cell_count(degree)] }
    }

    /// Checks that the length matches the number of cells.
    pub fn check_against(&self, c: &SquareSet) -> Result<()> {
        if self.degree > c.max_dim() {
            return Err(Error::DegreeOverflow { degree: self.degree, max_dim: c.max_dim() });
        }
        if self.values.len() != c.cell_count(self.degree) {
            return Err(Error::DimensionMismatch(format!(
                "cochain of degree {} has {} values for {} cells",
                self.degree,
                self.values.len(),
                c.cell_count(self.degree)
            )));
        }
        Ok(())
    }

    fn normalize(&mut self) {
        if self.ring == Ring::Z2 {
            let two = BigInt::from(2);
            for v in &mut self.values {
                *v = v.mod_floor(&two);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn eval(&self, x: usize) -> &BigInt {
        &self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Cochain::new(self.degree, self.ring, values))
    }

    pub fn scale(&self, k: &BigInt) -> Cochain {
        Cochain::new(self.degree, self.ring, self.values.iter().map(|v| v * k).collect())
    }

    fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.ring != other.ring || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch("cochains of different shape".into()));
        }
        Ok(())
    }

    /// `{"degree": n, "ring": "z"|"z2", "values": [...]}`; large values are strings.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "degree": self.degree,
            "ring": self.ring,
            "values": self.values.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(text: &str) -> Result<Cochain> {
        let v: Value = serde_json::from_str(text)?;
        let degree = v["degree"].as_u64().ok_or_else(|| Error::Malformed("missing degree".into()))? as usize;
        let ring = match v.get("ring") {
            None => Ring::Z,
            Some(r) => serde_json::from_value(r.clone())?,
        };
        let values = v["values"]
            .as_array()
            .ok_or_else(|| Error::Malformed("missing values".into()))?
            .iter()
            .map(|x| match x {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Malformed(format!("value {n} is not an integer"))),
                Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Malformed(format!("bad integer '{s}'"))),
                other => Err(Error::Malformed(format!("bad cochain value {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cochain::new(degree, ring, values))
    }
}

/// The cochain with value 1 on every `n`-cell.
pub fn unit_cocycle(c: &SquareSet, n: usize, ring: Ring) -> Result<Cochain> {
    if n > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() });
    }
    Ok(Cochain { degree: n, ring, values: vec![BigInt::one(); c.cell_count(n)] })
}

/// `(δu)(x) = u(∂x) = Σ_i (-1)^i (u(∂_i^1 x) - u(∂_i^0 x))`.
pub fn coboundary(c: &SquareSet, u: &Cochain) -> Result<Cochain> {
    u.check_against(c)?;
    let n = u.degree + 1;
    if n > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() });
    }
    let values = (0..c.cell_count(n))
        .map(|x| {
            let row = c.face_row(n, x);
            let mut acc = BigInt::zero();
            for i in 1..=n {
                let d = &u.values[row[2 * (i - 1) + 1] as usize] - &u.values[row[2 * (i - 1)] as usize];
                if i % 2 == 0 {
                    acc += d;
                } else {
                    acc -= d;
                }
            }
            acc
        })
        .collect();
    Ok(Cochain::new(n, u.ring, values))
}

/// One summand of the cup product formula on an `(m+n)`-cell.
#[derive(Clone, Debug)]
struct CupTerm {
    sign: i64,
    left: Vec<(usize, u8)>,
    right: Vec<(usize, u8)>,
}

/// `(u ∪ v)(c) = Σ_H s(H) · u(front face keeping H) · v(back face keeping K)`,
/// over the `m`-subsets `H` of `{1, ..., m+n}` with complement `K`, where `u`
/// has degree `m` and `v` degree `n`. On unit cochains the coefficient is
/// `Σ_H s(H) = φ_{n,m} = φ_{m,n}`.
pub fn cup(c: &SquareSet, u: &Cochain, v: &Cochain) -> Result<Cochain> {
    u.check_against(c)?;
    v.check_against(c)?;
    if u.ring != v.ring {
        return Err(Error::DimensionMismatch("cochains over different rings".into()));
    }
    let (m, n) = (u.degree, v.degree);
    let total = m + n;
    if total > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: total, max_dim: c.max_dim() });
    }
    let terms: Vec<CupTerm> = combinations(total, m)
        .into_iter()
        .map(|h| {
            let k: Vec<usize> = (1..=total).filter(|p| !h.contains(p)).collect();
            CupTerm {
                sign: shuffle_sign(&h),
                left: k.iter().map(|&p| (p, 0)).collect(),
                right: h.iter().map(|&p| (p, 1)).collect(),
            }
        })
        .collect();
    let values = (0..c.cell_count(total))
        .map(|x| {
            let mut acc = BigInt::zero();
            for t in &terms {
                let a = &u.values[c.apply_insertions(total, x, &t.left)];
                let b = &v.values[c.apply_insertions(total, x, &t.right)];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let p = a * b;
                if t.sign > 0 {
                    acc += p;
                } else {
                    acc -= p;
                }
            }
            acc
        })
        .collect();
    Ok(Cochain::new(total, u.ring, values))
}

/// `δ(u ∪ v) - (δu ∪ v + (-1)^m u ∪ δv)`; zero exactly when the Leibniz rule holds.
pub fn leibniz_defect(c: &SquareSet, u: &Cochain, v: &Cochain) -> Result<Cochain> {
    let lhs = coboundary(c, &cup(c, u, v)?)?;
    let a = cup(c, &coboundary(c, u)?, v)?;
    let b = cup(c, u, &coboundary(c, v)?)?;
    let sign = if u.degree % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let rhs = a.add(&b.scale(&sign))?;
    lhs.add(&rhs.scale(&-BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::shuffle::phi_closed;
    use crate::constructions::{rack_space, trivial_set, Group, Rack, DEFAULT_CELL_CAP};
    use rand::{Rng, SeedableRng};

    fn random(c: &SquareSet, degree: usize, rng: &mut impl Rng) -> Cochain {
        let values = (0..c.cell_count(degree)).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        Cochain::new(degree, Ring::Z, values)
    }

    #[test]
    fn unit_cocycles_are_closed() {
        let b = rack_space(&Rack::conjugation(&Group::symmetric3()), 3, DEFAULT_CELL_CAP).unwrap();
        for ring in [Ring::Z, Ring::Z2] {
            for n in 0..3 {
                assert!(coboundary(&b, &unit_cocycle(&b, n, ring).unwrap()).unwrap().is_zero());
            }
        }
        assert!(matches!(coboundary(&b, &unit_cocycle(&b, 3, Ring::Z).unwrap()), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let b = rack_space(&Rack::cyclic(3).unwrap(), 4, DEFAULT_CELL_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 0..3 {
            let u = random(&b, n, &mut rng);
            assert!(coboundary(&b, &coboundary(&b, &u).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn unit_products_follow_phi() {
        let t = trivial_set(8);
        for m in 0..=8 {
            for n in 0..=8 - m {
                let p = cup(&t, &unit_cocycle(&t, m, Ring::Z).unwrap(), &unit_cocycle(&t, n, Ring::Z).unwrap()).unwrap();
                assert_eq!(p, unit_cocycle(&t, m + n, Ring::Z).unwrap().scale(&phi_closed(m, n)));
            }
        }
    }

    #[test]
    fn leibniz_on_random_cochains() {
        let b = rack_space(&Rack::core(&Group::cyclic(3).unwrap()), 4, DEFAULT_CELL_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = rng.gen_range(0..=2);
            let n = rng.gen_range(0..=3 - m);
            let u = random(&b, m, &mut rng);
            let v = random(&b, n, &mut rng);
            assert!(leibniz_defect(&b, &u, &v).unwrap().is_zero(), "m={m} n={n}");
        }
    }

    #[test]
    fn json_round_trip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let u = Cochain::new(1, Ring::Z, vec![BigInt::from(-2), big]);
        let text = u.to_json().to_string();
        assert!(text.contains("\"123456789012345678901234567890\""));
        assert_eq!(Cochain::from_json(&text).unwrap(), u);
        let w = Cochain::new(0, Ring::Z2, vec![BigInt::from(3), BigInt::from(-1)]);
        assert_eq!(w.values(), &[BigInt::one(), BigInt::one()]);
    }
}
