//! C interface to `cubeset`.
//!
//! Every function returns a [`CubesetStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. Strings returned by the library are released with
//! [`cubeset_string_free`]. The message of the most recent failure on the
//! calling thread is available from [`cubeset_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cubeset::algebra::{homology, phi_closed, ChainComplex, HomologyGroup, Ring};
use cubeset::constructions::{cube_set, rack_space, trivial_set, Rack};
use cubeset::james::james_complex;
use cubeset::subdivision::{sd_delta, sd_square, DeltaSet};
use cubeset::{Error, SquareSet};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubesetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Malformed = 3,
    InvalidRack = 4,
    TooLarge = 5,
    DegreeOverflow = 6,
    ValidationFailed = 7,
    Overflow = 8,
    Panic = 9,
}

/// Coefficient ring.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubesetRing {
    Z = 0,
    Z2 = 1,
}

/// A □-set.
pub struct CubesetSquareSet(SquareSet);

/// A Δ-set.
pub struct CubesetDeltaSet(DeltaSet);

/// Homology groups of a complex, one per degree.
pub struct CubesetHomology(Vec<HomologyGroup>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CubesetStatus {
    match e {
        Error::Malformed(_) | Error::Json(_) | Error::Io(_) => CubesetStatus::Malformed,
        Error::InvalidRack(_) | Error::InvalidGroup(_) => CubesetStatus::InvalidRack,
        Error::TooLarge { .. } => CubesetStatus::TooLarge,
        Error::DegreeOverflow { .. } => CubesetStatus::DegreeOverflow,
        Error::DimensionMismatch(_) | Error::InvalidTrunk(_) | Error::InvalidMap(_) => CubesetStatus::InvalidArgument,
    }
}

struct Fail(CubesetStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any failure message and converts panics into [`CubesetStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CubesetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CubesetStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CubesetStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(CubesetStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CubesetStatus::Malformed, "string is not UTF-8".into()))
}

fn validated(c: SquareSet) -> Result<*mut CubesetSquareSet, Fail> {
    let report = c.validate();
    if let Some(v) = report.first() {
        return Err(Fail(CubesetStatus::ValidationFailed, format!("{} violations; first: {v}", report.len())));
    }
    Ok(Box::into_raw(Box::new(CubesetSquareSet(c))))
}

fn ring(r: CubesetRing) -> Ring {
    match r {
        CubesetRing::Z => Ring::Z,
        CubesetRing::Z2 => Ring::Z2,
    }
}

/// Copies the last failure message into `buf` (NUL-terminated, truncated to
/// `len`) and returns the full message length without the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cubeset_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cubeset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The trivial □-set with one cell per dimension up to `max_dim`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_trivial_set(max_dim: usize, out: *mut *mut CubesetSquareSet) -> CubesetStatus {
    guard(|| write(out, validated(trivial_set(max_dim))?))
}

/// The standard `n`-cube.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_cube_set(n: usize, out: *mut *mut CubesetSquareSet) -> CubesetStatus {
    guard(|| write(out, validated(cube_set(n))?))
}

/// Parses a □-set from JSON and validates it.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_from_json(json: *const c_char, out: *mut *mut CubesetSquareSet) -> CubesetStatus {
    guard(|| {
        let c = SquareSet::from_json(text(json)?)?;
        write(out, validated(c)?)
    })
}

/// The rack space of a rack given as JSON (`{"op": [[...]]}`), truncated at `max_dim`.
///
/// # Safety
/// `rack_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_rack_space(
    rack_json: *const c_char,
    max_dim: usize,
    cap: u64,
    out: *mut *mut CubesetSquareSet,
) -> CubesetStatus {
    guard(|| {
        let r = Rack::from_json(text(rack_json)?)?;
        write(out, validated(rack_space(&r, max_dim, u128::from(cap))?)?)
    })
}

/// The James complex `J^n` of a □-set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_james_complex(
    set: *const CubesetSquareSet,
    n: usize,
    out: *mut *mut CubesetSquareSet,
) -> CubesetStatus {
    guard(|| {
        let c = &borrow(set)?.0;
        if n > c.max_dim() {
            return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() }.into());
        }
        write(out, validated(james_complex(c, n)?.set)?)
    })
}

/// The Δ-subdivision of a □-set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_subdivide_delta(
    set: *const CubesetSquareSet,
    cap: u64,
    out: *mut *mut CubesetDeltaSet,
) -> CubesetStatus {
    guard(|| {
        let x = sd_delta(&borrow(set)?.0, u128::from(cap))?.set;
        let report = x.validate();
        if let Some(v) = report.first() {
            return Err(Fail(CubesetStatus::ValidationFailed, format!("{} violations; first: {v}", report.len())));
        }
        write(out, Box::into_raw(Box::new(CubesetDeltaSet(x))))
    })
}

/// The □-subdivision of a Δ-set.
///
/// # Safety
/// `delta` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_subdivide_square(
    delta: *const CubesetDeltaSet,
    cap: u64,
    out: *mut *mut CubesetSquareSet,
) -> CubesetStatus {
    guard(|| write(out, validated(sd_square(&borrow(delta)?.0, u128::from(cap))?.set)?))
}

/// Truncation dimension of a □-set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_max_dim(set: *const CubesetSquareSet, out: *mut usize) -> CubesetStatus {
    guard(|| write(out, borrow(set)?.0.max_dim()))
}

/// Number of `n`-cells; zero above the truncation dimension.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_cell_count(
    set: *const CubesetSquareSet,
    n: usize,
    out: *mut usize,
) -> CubesetStatus {
    guard(|| write(out, borrow(set)?.0.cell_count(n)))
}

/// The face `∂_i^eps` of the `n`-cell `x`.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_face(
    set: *const CubesetSquareSet,
    n: usize,
    x: usize,
    i: usize,
    eps: u8,
    out: *mut usize,
) -> CubesetStatus {
    guard(|| {
        let c = &borrow(set)?.0;
        if n == 0 || n > c.max_dim() || x >= c.cell_count(n) || i == 0 || i > n || eps > 1 {
            return Err(Fail(CubesetStatus::InvalidArgument, format!("no face ∂_{i}^{eps} of cell {x} in dimension {n}")));
        }
        write(out, c.face(n, x, i, eps))
    })
}

/// Euler characteristic of the truncated set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_euler(set: *const CubesetSquareSet, out: *mut i64) -> CubesetStatus {
    guard(|| {
        let chi = borrow(set)?.0.euler_characteristic();
        let chi = i64::try_from(chi).map_err(|_| Fail(CubesetStatus::Overflow, "Euler characteristic overflows".into()))?;
        write(out, chi)
    })
}

/// Number of face-relation violations.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_validate(set: *const CubesetSquareSet, out: *mut usize) -> CubesetStatus {
    guard(|| write(out, borrow(set)?.0.validate().len()))
}

/// JSON text of a □-set; release with [`cubeset_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_to_json(set: *const CubesetSquareSet, out: *mut *mut c_char) -> CubesetStatus {
    guard(|| {
        let s = borrow(set)?.0.to_json()?;
        write(out, CString::new(s).map_err(|_| Fail(CubesetStatus::Malformed, "NUL in JSON".into()))?.into_raw())
    })
}

/// Releases a □-set.
///
/// # Safety
/// `set` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cubeset_square_set_free(set: *mut CubesetSquareSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of `k`-simplices of a Δ-set.
///
/// # Safety
/// `delta` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_delta_set_cell_count(
    delta: *const CubesetDeltaSet,
    k: usize,
    out: *mut usize,
) -> CubesetStatus {
    guard(|| write(out, borrow(delta)?.0.cell_count(k)))
}

/// Releases a Δ-set.
///
/// # Safety
/// `delta` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cubeset_delta_set_free(delta: *mut CubesetDeltaSet) {
    if !delta.is_null() {
        drop(Box::from_raw(delta));
    }
}

/// Homology of a □-set in every degree up to its truncation dimension.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology(
    set: *const CubesetSquareSet,
    coeff: CubesetRing,
    out: *mut *mut CubesetHomology,
) -> CubesetStatus {
    guard(|| {
        let k = ChainComplex::from_square_set(&borrow(set)?.0, ring(coeff))?;
        write(out, Box::into_raw(Box::new(CubesetHomology(homology(&k)))))
    })
}

fn group(h: &CubesetHomology, degree: usize) -> Result<&HomologyGroup, Fail> {
    h.0.get(degree)
        .ok_or_else(|| Fail(CubesetStatus::InvalidArgument, format!("no homology in degree {degree}")))
}

/// Number of degrees computed.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_degrees(h: *const CubesetHomology, out: *mut usize) -> CubesetStatus {
    guard(|| write(out, borrow(h)?.0.len()))
}

/// Free rank in `degree`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_rank(h: *const CubesetHomology, degree: usize, out: *mut usize) -> CubesetStatus {
    guard(|| write(out, group(borrow(h)?, degree)?.rank))
}

/// Number of torsion coefficients in `degree`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_torsion_count(
    h: *const CubesetHomology,
    degree: usize,
    out: *mut usize,
) -> CubesetStatus {
    guard(|| write(out, group(borrow(h)?, degree)?.torsion.len()))
}

/// The `index`-th torsion coefficient in `degree`, as decimal text.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_torsion(
    h: *const CubesetHomology,
    degree: usize,
    index: usize,
    out: *mut *mut c_char,
) -> CubesetStatus {
    guard(|| {
        let g = group(borrow(h)?, degree)?;
        let t = g
            .torsion
            .get(index)
            .ok_or_else(|| Fail(CubesetStatus::InvalidArgument, format!("no torsion coefficient {index}")))?;
        write(out, CString::new(t.to_string()).expect("digits only").into_raw())
    })
}

/// Whether truncation cannot affect `degree`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_trusted(h: *const CubesetHomology, degree: usize, out: *mut bool) -> CubesetStatus {
    guard(|| write(out, group(borrow(h)?, degree)?.trusted))
}

/// Releases homology results.
///
/// # Safety
/// `h` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cubeset_homology_free(h: *mut CubesetHomology) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The shuffle-sign sum `φ_{m,n}`; fails with `Overflow` beyond 64 bits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cubeset_phi(m: usize, n: usize, out: *mut i64) -> CubesetStatus {
    guard(|| {
        let v = i64::try_from(phi_closed(m, n)).map_err(|_| Fail(CubesetStatus::Overflow, format!("φ_{{{m},{n}}} overflows")))?;
        write(out, v)
    })
}
