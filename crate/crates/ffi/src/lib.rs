//! C ABI for `quantum-affine`.
//!
//! Conventions:
//! * every fallible function returns a `QaStatus` (`QA_OK` on success) and
//!   writes results through out-pointers;
//! * a bicharacter lives behind an opaque `QaBicharacter*` created by
//!   `qa_bicharacter_new` / `qa_bicharacter_from_json` and released with
//!   `qa_bicharacter_free`;
//! * strings returned through `char**` are owned by the caller and must be
//!   released with `qa_string_free`;
//! * on failure, `qa_last_error_message` describes the error for the calling
//!   thread until the next call into the library.
//!
//! Subsets of generators are passed as bit masks: bit `i` stands for `x_{i+1}`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quantum_affine::input::parse_spec;
use quantum_affine::limit::{poisson_matrix, verify_limit, Deformation};
use quantum_affine::poly::Poly;
use quantum_affine::spectrum::{self, Granularity};
use quantum_affine::{Bicharacter, Error, Subset};

pub type QaStatus = i32;

pub const QA_OK: QaStatus = 0;
pub const QA_NULL_POINTER: QaStatus = 1;
pub const QA_INVALID_INPUT: QaStatus = 2;
pub const QA_DIMENSION_MISMATCH: QaStatus = 3;
pub const QA_BUFFER_TOO_SMALL: QaStatus = 4;
pub const QA_VERIFICATION_FAILED: QaStatus = 5;
pub const QA_INTERNAL: QaStatus = 6;

/// Opaque handle to an alternating bicharacter.
pub struct QaBicharacter {
    inner: Bicharacter,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: QaStatus, msg: impl AsRef<str>) -> QaStatus {
    set_error(msg.as_ref());
    status
}

fn status_of(e: &Error) -> QaStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } => QA_DIMENSION_MISMATCH,
        Error::LimitMismatch { .. } | Error::DiagramMismatch { .. } => QA_VERIFICATION_FAILED,
        _ => QA_INVALID_INPUT,
    }
}

fn from_error(e: Error) -> QaStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, mapping panics to `QA_INTERNAL`.
fn guarded<F: FnOnce() -> QaStatus>(f: F) -> QaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(QA_INTERNAL, "internal error (panic)"),
    }
}

unsafe fn handle<'a>(b: *const QaBicharacter) -> Result<&'a Bicharacter, QaStatus> {
    if b.is_null() {
        return Err(fail(QA_NULL_POINTER, "null bicharacter handle"));
    }
    Ok(&(*b).inner)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QaStatus> {
    if s.is_null() {
        return Err(fail(QA_NULL_POINTER, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(QA_INVALID_INPUT, "string is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> QaStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QA_OK
        }
        Err(_) => fail(QA_INTERNAL, "output contains a NUL byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Description of the last error on this thread, or NULL. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a bicharacter from `m` exponent matrices of size `n×n`, given as
/// `m·n·n` integers in row-major order, matrix after matrix.
///
/// # Safety
/// `entries` must point to `m·n·n` readable integers (or be NULL when that
/// product is zero); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qa_bicharacter_new(
    n: usize,
    m: usize,
    entries: *const i64,
    out: *mut *mut QaBicharacter,
) -> QaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let len = match m.checked_mul(n).and_then(|x| x.checked_mul(n)) {
            Some(l) => l,
            None => return fail(QA_INVALID_INPUT, "matrix size overflows"),
        };
        if len > 0 && entries.is_null() {
            return fail(QA_NULL_POINTER, "null matrix entries");
        }
        let flat = if len == 0 { &[][..] } else { std::slice::from_raw_parts(entries, len) };
        let mats = (0..m)
            .map(|k| (0..n).map(|i| flat[k * n * n + i * n..k * n * n + (i + 1) * n].to_vec()).collect())
            .collect();
        match Bicharacter::validate(mats, n) {
            Ok(b) => {
                *out = Box::into_raw(Box::new(QaBicharacter { inner: b }));
                QA_OK
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds a bicharacter from the JSON input format used by the `qaffine` tool.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qa_bicharacter_from_json(json: *const c_char, out: *mut *mut QaBicharacter) -> QaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let text = try_status!(read_str(json));
        match parse_spec(text) {
            Ok(spec) => {
                let inner = spec.bicharacter().clone();
                *out = Box::into_raw(Box::new(QaBicharacter { inner }));
                QA_OK
            }
            Err(e) => fail(QA_INVALID_INPUT, e.to_string()),
        }
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `b` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qa_bicharacter_free(b: *mut QaBicharacter) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of generators `n` and parameters `m`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qa_bicharacter_dims(b: *const QaBicharacter, n: *mut usize, m: *mut usize) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        if n.is_null() || m.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        *n = b.n();
        *m = b.m();
        QA_OK
    })
}

/// Rank of the radical lattice `S_w` for the subset encoded by `w_mask`.
///
/// # Safety
/// `b` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qa_radical_rank(b: *const QaBicharacter, w_mask: u64, out: *mut usize) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        if out.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let w = Subset::from_bits(w_mask);
        if !w.is_subset_of(Subset::full(b.n())) {
            return fail(QA_DIMENSION_MISMATCH, format!("mask {w_mask:#x} names generators beyond n = {}", b.n()));
        }
        *out = b.radical(w).rank();
        QA_OK
    })
}

/// Writes the ranks of all `2^n` strata, ordered by size of `w` and then
/// lexicographically, together with the matching masks when `masks` is not
/// NULL. `written` receives the required length; if `len` is too small
/// nothing else is written and `QA_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `ranks` (and `masks` if given) must have room for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn qa_stratum_ranks(
    b: *const QaBicharacter,
    ranks: *mut usize,
    masks: *mut u64,
    len: usize,
    written: *mut usize,
) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        if written.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let strata = match spectrum::full_spectrum(b, spectrum::DEFAULT_STRATUM_BOUND) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        *written = strata.len();
        if len < strata.len() {
            return fail(QA_BUFFER_TOO_SMALL, format!("need room for {} strata", strata.len()));
        }
        if ranks.is_null() {
            return fail(QA_NULL_POINTER, "null rank buffer");
        }
        for (i, r) in strata.iter().enumerate() {
            *ranks.add(i) = r.rank;
            if !masks.is_null() {
                *masks.add(i) = r.w.bits();
            }
        }
        QA_OK
    })
}

/// Poisson matrix `U[i][j] = Σ_k 2 L_k[i][j] μ_k` for rational `μ_k =
/// mu_num[k] / mu_den[k]`, written as `n·n` numerator/denominator pairs in
/// lowest terms (denominators positive).
///
/// # Safety
/// `mu_num`, `mu_den` must hold `m` integers; `out_num`, `out_den` must have
/// room for `n·n` integers.
#[no_mangle]
pub unsafe extern "C" fn qa_poisson_matrix(
    b: *const QaBicharacter,
    mu_num: *const i64,
    mu_den: *const i64,
    out_num: *mut i64,
    out_den: *mut i64,
    len: usize,
) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        let (n, m) = (b.n(), b.m());
        if len < n * n {
            return fail(QA_BUFFER_TOO_SMALL, format!("need room for {} entries", n * n));
        }
        if (m > 0 && (mu_num.is_null() || mu_den.is_null())) || out_num.is_null() || out_den.is_null() {
            return fail(QA_NULL_POINTER, "null buffer");
        }
        let mut mu = Vec::with_capacity(m);
        for k in 0..m {
            let den = *mu_den.add(k);
            if den == 0 {
                return fail(QA_INVALID_INPUT, format!("mu_{} has zero denominator", k + 1));
            }
            mu.push(Poly::constant(num_rational::BigRational::new((*mu_num.add(k)).into(), den.into())));
        }
        let u = match poisson_matrix(b, &mu) {
            Ok(u) => u,
            Err(e) => return from_error(e),
        };
        for i in 0..n {
            for j in 0..n {
                let c = u.entry(i, j).as_constant().unwrap_or_default();
                let (Ok(p), Ok(q)) = (i64::try_from(c.numer()), i64::try_from(c.denom())) else {
                    return fail(QA_INVALID_INPUT, "entry exceeds 64 bits");
                };
                *out_num.add(i * n + j) = p;
                *out_den.add(i * n + j) = q;
            }
        }
        QA_OK
    })
}

/// Checks the semiclassical limit formula on `(x^s, x^t)` with quadratic
/// interpolation and symbolic `μ`. Returns `QA_OK` when it holds and
/// `QA_VERIFICATION_FAILED` otherwise.
///
/// # Safety
/// `s` and `t` must hold `len` integers.
#[no_mangle]
pub unsafe extern "C" fn qa_verify_limit(
    b: *const QaBicharacter,
    s: *const i64,
    t: *const i64,
    len: usize,
) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        if len != b.n() {
            return fail(QA_DIMENSION_MISMATCH, format!("expected {} exponents, got {len}", b.n()));
        }
        if len > 0 && (s.is_null() || t.is_null()) {
            return fail(QA_NULL_POINTER, "null exponent vector");
        }
        let (s, t) = if len == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(s, len), std::slice::from_raw_parts(t, len))
        };
        match verify_limit(b, &Deformation::symbolic(b.m()), s, t) {
            Ok(_) => QA_OK,
            Err(e) => from_error(e),
        }
    })
}

/// Graphviz text of the stratum diagram. `torus_invariant` selects the
/// order on the ideals `⟨x_i : i ∈ w⟩` instead of the primitive strata.
///
/// # Safety
/// `out` must be valid; release the result with `qa_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qa_hasse_dot(b: *const QaBicharacter, torus_invariant: bool, out: *mut *mut c_char) -> QaStatus {
    guarded(|| {
        let b = try_status!(handle(b));
        if out.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let g = if torus_invariant {
            Granularity::TorusInvariant
        } else {
            Granularity::Primitive
        };
        match spectrum::hasse_diagram(b, g) {
            Ok(dot) => write_string(out, dot),
            Err(e) => from_error(e),
        }
    })
}

/// The `analyze` report of the `qaffine` tool for a JSON input.
///
/// # Safety
/// `json` must be NUL-terminated and `out` valid; release the result with
/// `qa_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qa_analyze_json(json: *const c_char, out: *mut *mut c_char) -> QaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(QA_NULL_POINTER, "null output pointer");
        }
        let text = try_status!(read_str(json));
        let spec = match parse_spec(text) {
            Ok(s) => s,
            Err(e) => return fail(QA_INVALID_INPUT, e.to_string()),
        };
        match quantum_affine::cli::analyze(&spec) {
            Ok(v) => write_string(out, serde_json::to_string_pretty(&v).expect("JSON values serialize")),
            Err(e) => fail(QA_INVALID_INPUT, e),
        }
    })
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
