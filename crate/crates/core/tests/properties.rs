mod common;

use std::sync::Arc;

use cubeset::algebra::{
    coboundary, cup, homology, leibniz_defect, phi_brute, phi_closed, phi_recurrence_table, smith_normal_form,
    unit_cocycle, ChainComplex, Cochain, Ring, SparseMatrix,
};
use cubeset::constructions::{
    induced_rack_map, rack_index, rack_space, rack_tuple, trivial_set, Rack, DEFAULT_CELL_CAP,
};
use cubeset::face::{combination_rank, combination_unrank, variables};
use cubeset::james::{estimate_james, induced_james_map, james_complex, pullback_face, Projection};
use cubeset::subdivision::{sd_delta, sd_square};
use cubeset::{FaceWord, SquareSet};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(rack: usize, dim: usize) -> SquareSet {
    let racks = common::racks();
    rack_space(&racks[rack % racks.len()].1, dim, DEFAULT_CELL_CAP).unwrap()
}

fn random_cochain(c: &SquareSet, degree: usize, ring: Ring, rng: &mut ChaCha8Rng) -> Cochain {
    let values = (0..c.cell_count(degree)).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
    Cochain::new(degree, ring, values)
}

fn pattern() -> impl Strategy<Value = Vec<Option<u8>>> {
    prop::collection::vec(prop_oneof![Just(None), Just(Some(0u8)), Just(Some(1u8))], 0..7)
}

fn projection() -> impl Strategy<Value = Projection> {
    (0usize..7)
        .prop_flat_map(|total| (Just(total), 0..=total))
        .prop_flat_map(|(total, n)| {
            let count = cubeset::face::binomial(total as u64, n as u64) as usize;
            (Just(total), Just(n), 0..count)
        })
        .prop_map(|(total, n, rank)| Projection::new(total, combination_unrank(total, n, rank)).unwrap())
}

/// Determinant by fraction-free elimination.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn matrix_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            let (x, y) = (a[rank][c].clone(), a[r][c].clone());
            for j in 0..cols {
                a[r][j] = &a[r][j] * &x - &a[rank][j] * &y;
            }
        }
        rank += 1;
    }
    rank
}

fn to_sparse(rows: &[Vec<i64>]) -> SparseMatrix {
    let triplets: Vec<(usize, usize, i64)> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)))
        .filter(|t| t.2 != 0)
        .collect();
    SparseMatrix::from_triplets(rows.len(), rows.first().map_or(0, |r| r.len()), &triplets, Ring::Z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rack_spaces_satisfy_face_relations(rack in 0usize..11, dim in 0usize..4) {
        prop_assert!(space(rack, dim).validate().is_empty());
    }

    #[test]
    fn rack_tuples_round_trip(size in 1usize..6, n in 0usize..5, seed in any::<u64>()) {
        let count = size.pow(n as u32);
        let x = (seed % count as u64) as usize;
        let t = rack_tuple(size, n, x);
        prop_assert_eq!(t.len(), n);
        prop_assert_eq!(rack_index(size, &t), x);
    }

    #[test]
    fn combinations_round_trip(total in 0usize..10, seed in any::<u64>()) {
        let n = (seed % (total as u64 + 1)) as usize;
        let count = cubeset::face::binomial(total as u64, n as u64) as usize;
        let rank = (seed / 11 % count as u64) as usize;
        let subset = combination_unrank(total, n, rank);
        prop_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(combination_rank(total, &subset), rank);
    }

    #[test]
    fn face_word_composition_is_evaluation(outer in pattern(), seed in any::<u64>()) {
        let outer = FaceWord::from_pattern(&outer);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner: Vec<Option<u8>> = (0..outer.source_dim())
            .map(|_| match rng.gen_range(0..3) { 0 => None, e => Some(e as u8 - 1) })
            .collect();
        let inner = FaceWord::from_pattern(&inner);
        let x = variables(inner.source_dim());
        let composite = outer.compose(&inner).unwrap();
        prop_assert_eq!(composite.eval(&x).unwrap(), outer.eval(&inner.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn front_back_factorisation(p in pattern()) {
        let w = FaceWord::from_pattern(&p);
        let (front, back) = w.front_back_decompose();
        prop_assert!(front.is_front());
        prop_assert!(back.is_back());
        prop_assert_eq!(front.compose(&back).unwrap(), w);
    }

    #[test]
    fn pullback_square_commutes(lambda in projection(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu: Vec<Option<u8>> = (0..lambda.k())
            .map(|_| match rng.gen_range(0..3) { 0 => None, e => Some(e as u8 - 1) })
            .collect();
        let mu = FaceWord::from_pattern(&mu);
        let (sharp, mu_lambda) = pullback_face(&mu, &lambda).unwrap();
        prop_assert_eq!(sharp.n(), lambda.n());
        let x = variables(lambda.n() + mu.source_dim());
        let left = lambda.apply(&mu_lambda.eval(&x).unwrap()).unwrap();
        let right = mu.eval(&sharp.apply(&x).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pullback_is_functorial(lambda in projection(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut word = |k: usize| -> FaceWord {
            let p: Vec<Option<u8>> =
                (0..k).map(|_| match rng.gen_range(0..3) { 0 => None, e => Some(e as u8 - 1) }).collect();
            FaceWord::from_pattern(&p)
        };
        let mu = word(lambda.k());
        let nu = word(mu.source_dim());
        let (mid, _) = pullback_face(&mu, &lambda).unwrap();
        let (stepwise, _) = pullback_face(&nu, &mid).unwrap();
        let (direct, _) = pullback_face(&mu.compose(&nu).unwrap(), &lambda).unwrap();
        prop_assert_eq!(direct, stepwise);
        let (same, _) = pullback_face(&FaceWord::identity(lambda.k()), &lambda).unwrap();
        prop_assert_eq!(same, lambda);
    }

    #[test]
    fn james_complexes_are_square_sets(rack in 0usize..11, n in 1usize..3, k in 0usize..3) {
        let c = space(rack, n + k);
        let j = james_complex(&c, n).unwrap();
        prop_assert!(j.set.validate().is_empty());
        let estimate: Vec<usize> = estimate_james(&c, n).into_iter().map(|v| v as usize).collect();
        prop_assert_eq!(j.set.cell_counts(), &estimate[..]);
        for d in 0..=j.set.max_dim() {
            prop_assert_eq!(j.set.cell_count(d), c.cell_count(n + d) * j.block_size(d));
            for idx in 0..j.set.cell_count(d) {
                prop_assert_eq!(j.index_of(&j.label(d, idx)), idx);
            }
        }
    }

    #[test]
    fn shuffle_signs_agree(m in 0usize..7, n in 0usize..7) {
        let brute = phi_brute(m, n);
        prop_assert_eq!(&brute, &phi_closed(m, n));
        prop_assert_eq!(&brute, &phi_closed(n, m));
        prop_assert_eq!(&phi_recurrence_table(m + n)[m][n], &brute);
    }

    #[test]
    fn leibniz_rule_on_random_cochains(rack in 0usize..11, m in 0usize..3, n in 0usize..3, seed in any::<u64>(), z2 in any::<bool>()) {
        let ring = if z2 { Ring::Z2 } else { Ring::Z };
        prop_assume!(m + n <= 3);
        let c = space(rack, m + n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_cochain(&c, m, ring, &mut rng);
        let v = random_cochain(&c, n, ring, &mut rng);
        prop_assert!(leibniz_defect(&c, &u, &v).unwrap().is_zero());
        prop_assert_eq!(cup(&c, &u, &v).unwrap().degree(), m + n);
    }

    #[test]
    fn coboundary_squares_to_zero(rack in 0usize..11, m in 0usize..3, seed in any::<u64>()) {
        let c = space(rack, m + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_cochain(&c, m, Ring::Z, &mut rng);
        prop_assert!(coboundary(&c, &coboundary(&c, &u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn unit_cochains_multiply_by_shuffle_signs(rack in 0usize..11, m in 0usize..3, n in 0usize..3) {
        let c = space(rack, m + n);
        let product = cup(&c, &unit_cocycle(&c, m, Ring::Z).unwrap(), &unit_cocycle(&c, n, Ring::Z).unwrap()).unwrap();
        let expected = unit_cocycle(&c, m + n, Ring::Z).unwrap().scale(&phi_closed(m, n));
        prop_assert_eq!(product, expected);
    }

    #[test]
    fn euler_characteristic_from_homology(rack in 0usize..11, dim in 0usize..4) {
        let c = space(rack, dim);
        let z = homology(&ChainComplex::from_square_set(&c, Ring::Z).unwrap());
        let z2 = homology(&ChainComplex::from_square_set(&c, Ring::Z2).unwrap());
        let chi = |hs: &[cubeset::algebra::HomologyGroup]| -> i128 {
            hs.iter().map(|h| if h.degree % 2 == 0 { h.rank as i128 } else { -(h.rank as i128) }).sum()
        };
        prop_assert_eq!(chi(&z), c.euler_characteristic());
        prop_assert_eq!(chi(&z2), c.euler_characteristic());
        // Universal coefficients: dim H_d(Z/2) = rank H_d + t_d + t_{d-1}, t counting even torsion.
        let even = |d: usize| z[d].torsion.iter().filter(|t| t.is_even()).count();
        for d in 0..z.len() {
            let expected = z[d].rank + even(d) + if d > 0 { even(d - 1) } else { 0 };
            prop_assert_eq!(z2[d].rank, expected, "degree {}", d);
        }
    }

    #[test]
    fn smith_form_matches_determinant_and_rank(n in 1usize..6, extra in 0usize..3, entries in prop::collection::vec(-4i64..=4, 64)) {
        let cols = n + extra;
        let rows: Vec<Vec<i64>> = (0..n).map(|r| entries[r * cols..(r + 1) * cols].to_vec()).collect();
        let snf = smith_normal_form(&to_sparse(&rows));
        prop_assert_eq!(snf.rank, matrix_rank(&rows));
        prop_assert!(snf.invariants.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert!(snf.invariants.iter().all(|d| d.is_positive()));
        let square: Vec<Vec<BigInt>> = rows.iter().map(|r| r[..n].iter().map(|&v| BigInt::from(v)).collect()).collect();
        let snf_sq = smith_normal_form(&to_sparse(&rows.iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>()));
        let det = bareiss(square).abs();
        if snf_sq.rank == n {
            prop_assert_eq!(snf_sq.invariants.iter().product::<BigInt>(), det);
        } else {
            prop_assert!(det.is_zero());
        }
    }

    #[test]
    fn subdivisions_preserve_euler_characteristic(rack in 0usize..11, dim in 0usize..3) {
        let c = space(rack, dim);
        let sd = sd_delta(&c, 1_000_000).unwrap();
        prop_assert!(sd.set.validate().is_empty());
        prop_assert_eq!(sd.set.euler_characteristic(), c.euler_characteristic());
        let sq = sd_square(&sd.set, 1_000_000).unwrap();
        prop_assert!(sq.set.validate().is_empty());
        prop_assert_eq!(sq.set.euler_characteristic(), c.euler_characteristic());
    }

    #[test]
    fn json_round_trips(rack in 0usize..11, dim in 0usize..4, seed in any::<u64>()) {
        let racks = common::racks();
        let r = &racks[rack % racks.len()].1;
        prop_assert_eq!(&Rack::from_json(&r.to_json().unwrap()).unwrap(), r);
        let c = space(rack, dim);
        prop_assert_eq!(SquareSet::from_json(&c.to_json().unwrap()).unwrap(), c.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_cochain(&c, dim, Ring::Z, &mut rng);
        prop_assert_eq!(Cochain::from_json(&u.to_json().to_string()).unwrap(), u);
    }

    #[test]
    fn induced_maps_compose(a in 1usize..4, b in 1usize..4, c in 1usize..4, f in prop::collection::vec(0usize..3, 3), g in prop::collection::vec(0usize..3, 3), dim in 0usize..4) {
        let (ra, rb, rc) = (Rack::trivial(a).unwrap(), Rack::trivial(b).unwrap(), Rack::trivial(c).unwrap());
        let f: Vec<usize> = f[..a].iter().map(|&v| v % b).collect();
        let g: Vec<usize> = g[..b].iter().map(|&v| v % c).collect();
        let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
        let sa = Arc::new(rack_space(&ra, dim, DEFAULT_CELL_CAP).unwrap());
        let sb = Arc::new(rack_space(&rb, dim, DEFAULT_CELL_CAP).unwrap());
        let sc = Arc::new(rack_space(&rc, dim, DEFAULT_CELL_CAP).unwrap());
        let mf = induced_rack_map(sa.clone(), &ra, sb.clone(), &rb, &f).unwrap();
        let mg = induced_rack_map(sb, &rb, sc.clone(), &rc, &g).unwrap();
        let mgf = induced_rack_map(sa, &ra, sc, &rc, &gf).unwrap();
        prop_assert!(mf.validate().is_empty());
        let composite = mg.compose(&mf).unwrap();
        prop_assert_eq!(composite.levels(), mgf.levels());
        if dim >= 1 {
            let jf = induced_james_map(&mf, 1).unwrap();
            let jg = induced_james_map(&mg, 1).unwrap();
            prop_assert!(jf.validate().is_empty());
            let (composite, direct) = (jg.compose(&jf).unwrap(), induced_james_map(&mgf, 1).unwrap());
            prop_assert_eq!(composite.levels(), direct.levels());
        }
    }

    #[test]
    fn truncation_is_a_prefix(dim in 0usize..6, cut in 0usize..6) {
        let t = trivial_set(dim);
        let cut = cut.min(dim);
        let s = t.truncate(cut);
        prop_assert_eq!(s.max_dim(), cut);
        prop_assert!(s.validate().is_empty());
        for n in 0..=cut {
            prop_assert_eq!(s.face_row(n, 0), t.face_row(n, 0));
        }
    }
}
