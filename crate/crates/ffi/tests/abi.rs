use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cubeset_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        cubeset_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn trivial_set_homology_through_handles() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(cubeset_trivial_set(5, &mut t), CubesetStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(cubeset_homology(t, CubesetRing::Z, &mut h), CubesetStatus::Ok);
        let mut degrees = 0;
        assert_eq!(cubeset_homology_degrees(h, &mut degrees), CubesetStatus::Ok);
        assert_eq!(degrees, 6);
        for n in 0..5 {
            let (mut rank, mut torsion, mut trusted) = (0, 0, false);
            assert_eq!(cubeset_homology_rank(h, n, &mut rank), CubesetStatus::Ok);
            assert_eq!(cubeset_homology_torsion_count(h, n, &mut torsion), CubesetStatus::Ok);
            assert_eq!(cubeset_homology_trusted(h, n, &mut trusted), CubesetStatus::Ok);
            assert_eq!((rank, torsion, trusted), (1, 0, true));
        }
        assert_eq!(cubeset_homology_rank(h, 9, &mut 0), CubesetStatus::InvalidArgument);
        cubeset_homology_free(h);
        cubeset_square_set_free(t);
    }
}

#[test]
fn torsion_is_reported_as_text() {
    let rack = CString::new(r#"{"op": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]}"#).unwrap();
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cubeset_rack_space(rack.as_ptr(), 3, 1_000_000, &mut c), CubesetStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(cubeset_homology(c, CubesetRing::Z, &mut h), CubesetStatus::Ok);
        let mut degrees = 0;
        cubeset_homology_degrees(h, &mut degrees);
        for n in 0..degrees {
            let mut count = 0;
            cubeset_homology_torsion_count(h, n, &mut count);
            for i in 0..count {
                let mut s = ptr::null_mut();
                assert_eq!(cubeset_homology_torsion(h, n, i, &mut s), CubesetStatus::Ok);
                let t: u64 = CStr::from_ptr(s).to_str().unwrap().parse().unwrap();
                assert!(t > 1);
                cubeset_string_free(s);
            }
        }
        cubeset_homology_free(h);
        cubeset_square_set_free(c);
    }
}

#[test]
fn faces_and_counts() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cubeset_cube_set(2, &mut c), CubesetStatus::Ok);
        let mut counts = [0usize; 3];
        for (n, slot) in counts.iter_mut().enumerate() {
            assert_eq!(cubeset_square_set_cell_count(c, n, slot), CubesetStatus::Ok);
        }
        assert_eq!(counts, [4, 4, 1]);
        let (mut dim, mut chi, mut bad) = (0, 0, 1);
        assert_eq!(cubeset_square_set_max_dim(c, &mut dim), CubesetStatus::Ok);
        assert_eq!(cubeset_square_set_euler(c, &mut chi), CubesetStatus::Ok);
        assert_eq!(cubeset_square_set_validate(c, &mut bad), CubesetStatus::Ok);
        assert_eq!((dim, chi, bad), (2, 1, 0));
        let mut f = 0;
        assert_eq!(cubeset_square_set_face(c, 2, 0, 1, 0, &mut f), CubesetStatus::Ok);
        assert!(f < 4);
        assert_eq!(cubeset_square_set_face(c, 2, 0, 3, 0, &mut f), CubesetStatus::InvalidArgument);
        cubeset_square_set_free(c);
    }
}

#[test]
fn json_round_trip_and_subdivisions() {
    unsafe {
        let mut c = ptr::null_mut();
        cubeset_cube_set(2, &mut c);
        let mut json = ptr::null_mut();
        assert_eq!(cubeset_square_set_to_json(c, &mut json), CubesetStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cubeset_square_set_from_json(json, &mut back), CubesetStatus::Ok);
        cubeset_string_free(json);
        let mut d = ptr::null_mut();
        assert_eq!(cubeset_subdivide_delta(back, 1_000_000, &mut d), CubesetStatus::Ok);
        let mut tris = 0;
        cubeset_delta_set_cell_count(d, 2, &mut tris);
        assert_eq!(tris, 8);
        let mut s = ptr::null_mut();
        assert_eq!(cubeset_subdivide_square(d, 1_000_000, &mut s), CubesetStatus::Ok);
        let mut chi = 0;
        cubeset_square_set_euler(s, &mut chi);
        assert_eq!(chi, 1);
        cubeset_square_set_free(s);
        cubeset_delta_set_free(d);
        cubeset_square_set_free(back);
        cubeset_square_set_free(c);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let not_a_rack = CString::new(r#"{"op": [[0, 0], [0, 1]]}"#).unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(cubeset_rack_space(not_a_rack.as_ptr(), 2, 1000, &mut c), CubesetStatus::InvalidRack);
        assert!(c.is_null());
        assert!(!last_error().is_empty());
        let garbage = CString::new("{").unwrap();
        assert_eq!(cubeset_square_set_from_json(garbage.as_ptr(), &mut c), CubesetStatus::Malformed);
        let two = CString::new(r#"{"op": [[0, 0], [1, 1]]}"#).unwrap();
        assert_eq!(cubeset_rack_space(two.as_ptr(), 30, 1000, &mut c), CubesetStatus::TooLarge);
        assert_eq!(cubeset_trivial_set(3, ptr::null_mut()), CubesetStatus::NullPointer);
        assert_eq!(cubeset_james_complex(ptr::null(), 0, &mut c), CubesetStatus::NullPointer);
        let mut t = ptr::null_mut();
        cubeset_trivial_set(2, &mut t);
        assert_eq!(cubeset_james_complex(t, 3, &mut c), CubesetStatus::DegreeOverflow);
        cubeset_square_set_free(t);
        let mut phi = 0;
        assert_eq!(cubeset_phi(2, 2, &mut phi), CubesetStatus::Ok);
        assert_eq!(phi, 2);
        assert_eq!(cubeset_phi(1, 1, &mut phi), CubesetStatus::Ok);
        assert_eq!(phi, 0);
        assert_eq!(cubeset_phi(80, 80, &mut phi), CubesetStatus::Overflow);
    }
}

#[test]
fn header_is_generated_and_usable_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include").join("cubeset.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for name in ["cubeset_homology", "cubeset_last_error", "CUBESET_STATUS_TOO_LARGE", "typedef struct CubesetSquareSet"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // the static library is built next to the test binary in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("libcubeset_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests").join("c").join("smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "top=3 phi=2 err=set");
}
