//! Complexes shared by the integration tests.

#![allow(dead_code)]

use cubeset::constructions::{cube_set, rack_space, trivial_set, Group, Rack, DEFAULT_CELL_CAP};
use cubeset::james::james_complex;
use cubeset::subdivision::{estimate_sd_delta, estimate_sd_square};
use cubeset::SquareSet;

/// Largest subdivision (cells of `Sd_Δ` or of `Sd_□ Sd_Δ`) the suites build.
pub const SUBDIVISION_BUDGET: u128 = 600_000;

/// The racks of size at most three, plus the conjugation and core racks of
/// `Z/2`, `Z/3` and `S_3`.
pub fn racks() -> Vec<(String, Rack)> {
    let z2 = Group::cyclic(2).unwrap();
    let z3 = Group::cyclic(3).unwrap();
    let s3 = Group::symmetric3();
    vec![
        ("trivial(1)".into(), Rack::trivial(1).unwrap()),
        ("trivial(2)".into(), Rack::trivial(2).unwrap()),
        ("trivial(3)".into(), Rack::trivial(3).unwrap()),
        ("cyclic(2)".into(), Rack::cyclic(2).unwrap()),
        ("cyclic(3)".into(), Rack::cyclic(3).unwrap()),
        ("conj(Z2)".into(), Rack::conjugation(&z2)),
        ("conj(Z3)".into(), Rack::conjugation(&z3)),
        ("conj(S3)".into(), Rack::conjugation(&s3)),
        ("core(Z2)".into(), Rack::core(&z2)),
        ("core(Z3)".into(), Rack::core(&z3)),
        ("core(S3)".into(), Rack::core(&s3)),
    ]
}

/// `trivial_set(8)`, the cubes up to dimension 5 and the rack spaces of
/// [`racks`] to dimension 5.
pub fn base_suite() -> Vec<(String, SquareSet)> {
    let mut out = vec![("T(8)".to_string(), trivial_set(8))];
    for n in 0..=5 {
        out.push((format!("I^{n}"), cube_set(n)));
    }
    for (name, r) in racks() {
        out.push((format!("B{name}"), rack_space(&r, 5, DEFAULT_CELL_CAP).unwrap()));
    }
    out
}

/// [`base_suite`] together with every James complex `J^n`, `1 <= n <= max_dim`.
pub fn suite() -> Vec<(String, SquareSet)> {
    let mut out = Vec::new();
    for (name, c) in base_suite() {
        for n in 1..=c.max_dim() {
            out.push((format!("J^{n}({name})"), james_complex(&c, n).unwrap().set));
        }
        out.push((name, c));
    }
    out
}

/// The largest truncation `d` of `c` whose `Sd_Δ` and `Sd_□ Sd_Δ` both fit in
/// [`SUBDIVISION_BUDGET`].
pub fn subdivision_depth(c: &SquareSet) -> usize {
    (0..=c.max_dim())
        .rev()
        .find(|&d| {
            let delta = estimate_sd_delta(&c.cell_counts()[..=d]);
            let square = estimate_sd_square(&delta.iter().map(|&v| v as usize).collect::<Vec<_>>());
            delta.iter().sum::<u128>() <= SUBDIVISION_BUDGET && square.iter().sum::<u128>() <= SUBDIVISION_BUDGET
        })
        .unwrap_or(0)
}

/// `c` truncated at [`subdivision_depth`].
pub fn subdividable(c: &SquareSet) -> SquareSet {
    let d = subdivision_depth(c);
    if d < c.max_dim() {
        c.truncate(d)
    } else {
        c.clone()
    }
}
