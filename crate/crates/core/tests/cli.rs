use std::path::{Path, PathBuf};

use cubeset::constructions::{Group, Rack};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cubeset(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cubeset").chain(args.iter().copied());
    let code = cubeset::cli::run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", r.out))
}

#[test]
fn rack_check_accepts_conjugation_of_s3() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "s3.json", &Rack::conjugation(&Group::symmetric3()).to_json().unwrap());
    let r = cubeset(&["--format", "text", "rack", "check", "--input", s(&rack)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.trim(), "valid rack, size 6");
}

#[test]
fn rack_check_rejects_non_rack_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"op": [[0, 0], [0, 1]]}"#);
    let r = cubeset(&["rack", "check", "--input", s(&bad)]);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r)["valid"], Value::Bool(false));
    assert!(r.err.contains("invalid rack"));
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(cubeset(&["bogus"]).code, 2);
    assert_eq!(cubeset(&["phi"]).code, 2);
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    let r = cubeset(&["rack", "check", "--input", s(&missing)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("cannot read"));
    let garbage = write(&dir, "garbage.json", "not json");
    assert_eq!(cubeset(&["homology", "--input", s(&garbage)]).code, 2);
}

#[test]
fn help_exits_0() {
    let r = cubeset(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("homology"));
}

#[test]
fn phi_table_has_known_entries() {
    let r = cubeset(&["phi", "--max", "8"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["agree"], true);
    let table = v["table"].as_array().expect("table");
    assert_eq!(table.len(), 81);
    let at = |m: usize, n: usize| {
        let e = table.iter().find(|e| e["m"] == m && e["n"] == n).expect("entry");
        assert_eq!(e["phi"], e["recurrence"]);
        e["phi"].as_i64().unwrap()
    };
    assert_eq!(at(1, 1), 0);
    assert_eq!(at(2, 2), 2);
    assert_eq!(at(1, 2), 1);
    assert_eq!(at(4, 4), 6);
    assert_eq!(at(0, 8), 1);
}

#[test]
fn homology_of_cyclic_rack_space() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "c2.json", &Rack::cyclic(2).unwrap().to_json().unwrap());
    let r = cubeset(&["homology", "--rack", s(&rack), "--max-dim", "4"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let groups = json(&r)["groups"].as_array().unwrap().clone();
    assert_eq!(groups.len(), 5);
    for g in &groups[..4] {
        assert_eq!(g["rank"], 1);
        assert_eq!(g["trusted"], true);
    }
    assert_eq!(groups[4]["trusted"], false);

    let t = cubeset(&["--format", "text", "homology", "--rack", s(&rack), "--max-dim", "4"]);
    assert!(t.out.starts_with("H0(Z) = Z\nH1(Z) = Z\n"), "{}", t.out);
    assert!(t.out.lines().last().unwrap().ends_with("[untrusted]"));
}

#[test]
fn csv_output_has_header() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "t2.json", &Rack::trivial(2).unwrap().to_json().unwrap());
    let r = cubeset(&["--format", "csv", "homology", "--rack", s(&rack), "--max-dim", "3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut lines = r.out.lines();
    assert_eq!(lines.next(), Some("degree,rank,torsion,trusted"));
    assert_eq!(lines.next(), Some("0,1,,true"));
    assert_eq!(lines.next(), Some("1,2,,true"));
    assert_eq!(lines.next(), Some("2,4,,true"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "core.json", &Rack::core(&Group::symmetric3()).to_json().unwrap());
    let args = ["homology", "--rack", s(&rack), "--max-dim", "3"];
    let a = cubeset(&args);
    let b = cubeset(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    let v = ["verify", "--rack", s(&rack), "--max-dim", "3", "--seed", "11", "--samples", "20"];
    assert_eq!(cubeset(&v).out, cubeset(&v).out);
}

#[test]
fn output_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("phi.json");
    let r = cubeset(&["--output", s(&target), "phi", "--max", "5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, cubeset(&["phi", "--max", "5"]).out);
}

#[test]
fn export_then_homology_round_trip() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "c3.json", &Rack::cyclic(3).unwrap().to_json().unwrap());
    let set = dir.path().join("set.json");
    let r = cubeset(&["--output", s(&set), "rack", "space", "--input", s(&rack), "--max-dim", "3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let direct = cubeset(&["homology", "--rack", s(&rack), "--max-dim", "3"]);
    let loaded = cubeset(&["homology", "--input", s(&set)]);
    assert_eq!(loaded.code, 0, "{}", loaded.err);
    assert_eq!(direct.out, loaded.out);
}

#[test]
fn verify_passes_on_rack_space() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "z3.json", &Rack::core(&Group::cyclic(3).unwrap()).to_json().unwrap());
    let r = cubeset(&["--format", "text", "verify", "--rack", s(&rack), "--max-dim", "3", "--samples", "30"]);
    assert_eq!(r.code, 0, "{}{}", r.out, r.err);
    assert!(r.out.lines().all(|l| l.starts_with("ok")), "{}", r.out);
}

#[test]
fn cup_of_units_follows_shuffle_signs() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "t1.json", &Rack::trivial(1).unwrap().to_json().unwrap());
    let r = cubeset(&["--format", "text", "cup", "--rack", s(&rack), "--max-dim", "4", "--left", "unit:2", "--right", "unit:2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("2 times the unit cochain of degree 4"), "{}", r.out);
    let r = cubeset(&["--format", "text", "cup", "--rack", s(&rack), "--max-dim", "4", "--left", "unit:1", "--right", "unit:3"]);
    assert!(r.out.starts_with("0 times"), "{}", r.out);
}

#[test]
fn james_estimate_matches_build() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "c2.json", &Rack::cyclic(2).unwrap().to_json().unwrap());
    let est = cubeset(&["james", "--rack", s(&rack), "--max-dim", "3", "--n", "1", "--estimate"]);
    let built = cubeset(&["james", "--rack", s(&rack), "--max-dim", "3", "--n", "1"]);
    assert_eq!(est.code, 0, "{}", est.err);
    assert_eq!(built.code, 0, "{}", built.err);
    let counts = |v: &Value| -> Vec<String> {
        v["cells"].as_array().unwrap().iter().map(|c| c.to_string().trim_matches('"').to_string()).collect()
    };
    assert_eq!(json(&est)["exact"], true);
    assert_eq!(counts(&json(&est)), counts(&json(&built)));
}

#[test]
fn estimate_beyond_cap_is_rejected() {
    let dir = TempDir::new().unwrap();
    let rack = write(&dir, "s3.json", &Rack::conjugation(&Group::symmetric3()).to_json().unwrap());
    let r = cubeset(&["homology", "--rack", s(&rack), "--max-dim", "6", "--cap", "1000"]);
    assert_eq!(r.code, 2);
    assert!(!r.err.is_empty());
}
