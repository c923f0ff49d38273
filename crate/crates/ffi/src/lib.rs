//! C ABI for `diam-ramsey`.
//!
//! Colorings, problem specs and witnesses cross the boundary as opaque
//! handles. Every fallible call returns a [`DrsStatus`]; on failure the
//! message is available from [`drs_last_error_message`] on the same thread.
//! Strings returned through `char **` out-parameters are owned by the caller
//! and released with [`drs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diam_ramsey::search::Outcome;
use diam_ramsey::{Coloring, Error, ProblemSpec, SearchConfig, Witness};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotFound = 5,
    Inconclusive = 6,
    BudgetExceeded = 7,
    FormulaContradicted = 8,
    Internal = 9,
}

/// Opaque coloring of `[1, N]`.
pub struct DrsColoring(Coloring);

/// Opaque problem spec `(m_1, ..., m_t; r)`, optionally strict.
pub struct DrsSpec(ProblemSpec);

/// Opaque solution `B_1 <_p ... <_p B_t`.
pub struct DrsWitness(Witness);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: DrsStatus, msg: impl Into<String>) -> DrsStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> DrsStatus {
    match err {
        Error::Parse { .. } => DrsStatus::Parse,
        Error::NotFound { .. } => DrsStatus::NotFound,
        Error::BudgetExceeded { .. } => DrsStatus::BudgetExceeded,
        Error::FormulaContradicted { .. } => DrsStatus::FormulaContradicted,
        Error::LemmaViolation { .. } => DrsStatus::Internal,
        _ => DrsStatus::InvalidArgument,
    }
}

fn from_error(err: Error) -> DrsStatus {
    fail(status_of(&err), err.to_string())
}

/// Runs `body`, converting panics into `DrsStatus::Internal`.
fn guard(body: impl FnOnce() -> DrsStatus) -> DrsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(DrsStatus::Internal, msg)
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, DrsStatus> {
    p.as_ref().ok_or_else(|| fail(DrsStatus::NullPointer, format!("{what} is null")))
}

fn out_string(s: String, out: *mut *mut c_char) -> DrsStatus {
    match CString::new(s) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            DrsStatus::Ok
        }
        Err(e) => fail(DrsStatus::Internal, e.to_string()),
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn drs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn drs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a run-length string such as `0^21^20^3` or `0^{12}`.
/// `num_colors == 0` infers the color count from the largest digit (at least 2).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_parse(
    text: *const c_char,
    num_colors: u8,
    out: *mut *mut DrsColoring,
) -> DrsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(DrsStatus::NullPointer, "null argument to drs_coloring_parse");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(DrsStatus::InvalidUtf8, "coloring string is not UTF-8");
        };
        let parsed = if num_colors == 0 {
            s.parse::<Coloring>()
        } else {
            Coloring::parse(s, num_colors)
        };
        match parsed {
            Ok(c) => {
                *out = Box::into_raw(Box::new(DrsColoring(c)));
                DrsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds a coloring from `len` colors, each in `[0, num_colors)`.
///
/// # Safety
/// `colors` must point to `len` readable bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_from_colors(
    colors: *const u8,
    len: usize,
    num_colors: u8,
    out: *mut *mut DrsColoring,
) -> DrsStatus {
    guard(|| {
        if colors.is_null() || out.is_null() {
            return fail(DrsStatus::NullPointer, "null argument to drs_coloring_from_colors");
        }
        let slice = std::slice::from_raw_parts(colors, len);
        match Coloring::new(slice.to_vec(), num_colors) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(DrsColoring(c)));
                DrsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_free(c: *mut DrsColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Length `N` of the coloring, 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_len(c: *const DrsColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Color of position `pos` (1-based).
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_get(c: *const DrsColoring, pos: usize, out: *mut u8) -> DrsStatus {
    guard(|| {
        let c = match deref(c, "coloring") {
            Ok(c) => &c.0,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        if pos == 0 || pos > c.len() {
            return fail(DrsStatus::InvalidArgument, format!("position {pos} outside [1, {}]", c.len()));
        }
        *out = c.color(pos);
        DrsStatus::Ok
    })
}

/// Canonical run-length string of the coloring.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drs_coloring_format(c: *const DrsColoring, out: *mut *mut c_char) -> DrsStatus {
    guard(|| {
        let c = match deref(c, "coloring") {
            Ok(c) => &c.0,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        out_string(c.to_run_string(), out)
    })
}

/// Creates the spec `(sizes[0], ..., sizes[t-1]; num_colors)`.
///
/// # Safety
/// `sizes` must point to `t` readable values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn drs_spec_new(
    sizes: *const usize,
    t: usize,
    num_colors: u8,
    strict: bool,
    out: *mut *mut DrsSpec,
) -> DrsStatus {
    guard(|| {
        if sizes.is_null() || out.is_null() {
            return fail(DrsStatus::NullPointer, "null argument to drs_spec_new");
        }
        let sizes = std::slice::from_raw_parts(sizes, t).to_vec();
        match ProblemSpec::new(sizes, num_colors, strict) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(DrsSpec(s)));
                DrsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drs_spec_free(s: *mut DrsSpec) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes whether the coloring contains a solution of the spec.
///
/// # Safety
/// Handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn drs_has_solution(c: *const DrsColoring, s: *const DrsSpec, out: *mut bool) -> DrsStatus {
    guard(|| {
        let (c, s) = match (deref(c, "coloring"), deref(s, "spec")) {
            (Ok(c), Ok(s)) => (&c.0, &s.0),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        *out = diam_ramsey::has_solution(c, s);
        DrsStatus::Ok
    })
}

/// Finds the canonical solution. `*out` is set to null when none exists.
///
/// # Safety
/// Handles must be live and `out` valid. A non-null result must be released
/// with [`drs_witness_free`].
#[no_mangle]
pub unsafe extern "C" fn drs_exists_solution(
    c: *const DrsColoring,
    s: *const DrsSpec,
    out: *mut *mut DrsWitness,
) -> DrsStatus {
    guard(|| {
        let (c, s) = match (deref(c, "coloring"), deref(s, "spec")) {
            (Ok(c), Ok(s)) => (&c.0, &s.0),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        *out = diam_ramsey::exists_solution(c, s).map_or(ptr::null_mut(), |w| Box::into_raw(Box::new(DrsWitness(w))));
        DrsStatus::Ok
    })
}

/// # Safety
/// `w` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drs_witness_free(w: *mut DrsWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of sets `t` in the witness, 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn drs_witness_set_count(w: *const DrsWitness) -> usize {
    w.as_ref().map_or(0, |w| w.0.sets.len())
}

/// Copies set `index` (0-based) into `buf`, which holds `cap` entries.
/// `*len` receives the set size; when `cap` is too small nothing is copied
/// and `DRS_STATUS_INVALID_ARGUMENT` is returned.
///
/// # Safety
/// `w` must be live, `buf` must hold `cap` writable entries, `len` and
/// `color` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn drs_witness_set(
    w: *const DrsWitness,
    index: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
    color: *mut u8,
) -> DrsStatus {
    guard(|| {
        let w = match deref(w, "witness") {
            Ok(w) => &w.0,
            Err(s) => return s,
        };
        if buf.is_null() || len.is_null() || color.is_null() {
            return fail(DrsStatus::NullPointer, "null argument to drs_witness_set");
        }
        let Some(set) = w.sets.get(index) else {
            return fail(DrsStatus::InvalidArgument, format!("set index {index} out of range"));
        };
        let elems = set.elements();
        *len = elems.len();
        *color = w.colors[index];
        if elems.len() > cap {
            return fail(DrsStatus::InvalidArgument, format!("buffer holds {cap}, set has {}", elems.len()));
        }
        ptr::copy_nonoverlapping(elems.as_ptr(), buf, elems.len());
        DrsStatus::Ok
    })
}

/// Computes `f` for the spec by exhaustive search.
///
/// `workers == 0` uses the available parallelism; `node_budget == 0` means
/// unlimited. Returns `DRS_STATUS_INCONCLUSIVE` if the default cap was
/// reached, `DRS_STATUS_BUDGET_EXCEEDED` if the budget ran out, and
/// `DRS_STATUS_FORMULA_CONTRADICTED` if the result disagrees with a known
/// closed form.
///
/// # Safety
/// `s` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn drs_compute_f(s: *const DrsSpec, workers: usize, node_budget: u64, out: *mut usize) -> DrsStatus {
    guard(|| {
        let s = match deref(s, "spec") {
            Ok(s) => &s.0,
            Err(e) => return e,
        };
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        let worker_count = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        let config = SearchConfig {
            worker_count,
            node_budget: (node_budget > 0).then_some(node_budget),
            ..SearchConfig::default()
        };
        match diam_ramsey::compute_f(s, &config) {
            Ok(res) => match res.outcome {
                Outcome::Exact(f) => {
                    *out = f;
                    DrsStatus::Ok
                }
                Outcome::Inconclusive { n_cap } => {
                    *out = n_cap;
                    fail(DrsStatus::Inconclusive, format!("f > {n_cap}, cap reached"))
                }
            },
            Err(e) => from_error(e),
        }
    })
}

/// Closed form for `f(m, m, m; 2)`, `m >= 2`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn drs_formula_f_mmm2(m: usize, out: *mut usize) -> DrsStatus {
    guard(|| {
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        match diam_ramsey::formula_f_mmm2(m) {
            Ok(v) => {
                *out = v;
                DrsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The extremal 2-coloring of length `f(m, m, m; 2) - 1`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn drs_lower_bound_coloring(m: usize, out: *mut *mut DrsColoring) -> DrsStatus {
    guard(|| {
        if out.is_null() {
            return fail(DrsStatus::NullPointer, "out is null");
        }
        match diam_ramsey::lower_bound_coloring(m) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(DrsColoring(c)));
                DrsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
