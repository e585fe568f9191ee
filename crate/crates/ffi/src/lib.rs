//! C ABI for the `qstancu` library.
//!
//! Every entry point returns a [`QstancuStatus`] and writes results through
//! out-pointers. Parameters and functions live behind opaque handles that the
//! caller frees with the matching `_free` call. On failure a message is kept
//! per thread and can be read with [`qstancu_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qstancu::limitop::{limit_apply, limit_moment_general};
use qstancu::qcore::q_pochhammer_infinite;
use qstancu::stancu::{apply, basis, moment_closed_form, StancuOptions};
use qstancu::{Error, QParams, Rational, SampledFunction};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QstancuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegeneratePoint = 3,
    Unsupported = 4,
    BufferTooSmall = 5,
    ParseError = 6,
    Panic = 7,
}

impl From<&Error> for QstancuStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DegeneratePoint => QstancuStatus::DegeneratePoint,
            Error::Parse(_) => QstancuStatus::ParseError,
            Error::UnsupportedOrder(_)
            | Error::ExactModeUnsupported(_)
            | Error::ModeMismatch(_) => QstancuStatus::Unsupported,
            _ => QstancuStatus::InvalidArgument,
        }
    }
}

/// `q` and `alpha` in double precision.
pub struct QstancuParams {
    inner: QParams<f64>,
}

/// A parsed function spec such as `"e2"`, `"poly:1,0,-1"` or `"exp"`.
pub struct QstancuFunction {
    inner: SampledFunction<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: QstancuStatus, msg: impl Into<String>) -> QstancuStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> QstancuStatus {
    fail((&e).into(), e.to_string())
}

/// Runs `f`, turning panics into `Panic` and clearing the error slot on entry.
fn guard(f: impl FnOnce() -> QstancuStatus) -> QstancuStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(QstancuStatus::Panic, "internal panic"),
    }
}

macro_rules! deref {
    ($p:expr, $name:literal) => {
        match $p.as_ref() {
            Some(v) => v,
            None => return fail(QstancuStatus::NullPointer, concat!($name, " is null")),
        }
    };
}

macro_rules! out {
    ($p:expr, $name:literal) => {
        if $p.is_null() {
            return fail(QstancuStatus::NullPointer, concat!($name, " is null"));
        }
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, QstancuStatus> {
    if p.is_null() {
        return Err(fail(QstancuStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            QstancuStatus::ParseError,
            format!("{name} is not valid UTF-8"),
        )
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qstancu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a parameter handle; requires `0 < q < 1` and `alpha >= 0`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qstancu_params_new(
    q: f64,
    alpha: f64,
    out: *mut *mut QstancuParams,
) -> QstancuStatus {
    guard(|| {
        out!(out, "out");
        let inner = tri!(QParams::new(q, alpha));
        *out = Box::into_raw(Box::new(QstancuParams { inner }));
        QstancuStatus::Ok
    })
}

/// # Safety
/// `params` must be null or a handle from [`qstancu_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qstancu_params_free(params: *mut QstancuParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Parses a function spec.
///
/// # Safety
/// `spec` must be null or a NUL-terminated string; `out` must be null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qstancu_function_parse(
    spec: *const c_char,
    out: *mut *mut QstancuFunction,
) -> QstancuStatus {
    guard(|| {
        out!(out, "out");
        let spec = match read_str(spec, "spec") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let inner = tri!(spec.parse());
        *out = Box::into_raw(Box::new(QstancuFunction { inner }));
        QstancuStatus::Ok
    })
}

/// # Safety
/// `f` must be null or a handle from [`qstancu_function_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qstancu_function_free(f: *mut QstancuFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Writes `p_{n,0}(x) .. p_{n,n}(x)` to `out[0..=n]`; `len` must be at least `n + 1`.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qstancu_basis(
    params: *const QstancuParams,
    n: usize,
    x: f64,
    out: *mut f64,
    len: usize,
) -> QstancuStatus {
    guard(|| {
        let p = deref!(params, "params");
        out!(out, "out");
        if len <= n {
            return fail(
                QstancuStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {}", n + 1),
            );
        }
        let b = tri!(basis(&p.inner, n, &x, &StancuOptions::default()));
        ptr::copy_nonoverlapping(b.values.as_ptr(), out, b.values.len());
        QstancuStatus::Ok
    })
}

/// `S_n(f; x)`.
///
/// # Safety
/// `params` and `f` must be live handles; `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn qstancu_apply(
    params: *const QstancuParams,
    n: usize,
    f: *const QstancuFunction,
    x: f64,
    out: *mut f64,
) -> QstancuStatus {
    guard(|| {
        let p = deref!(params, "params");
        let f = deref!(f, "f");
        out!(out, "out");
        *out = tri!(apply(&p.inner, n, &f.inner, &x));
        QstancuStatus::Ok
    })
}

/// `S_n(e_m; x)` for `m` in `{0, 1, 2}`.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn qstancu_moment_closed_form(
    params: *const QstancuParams,
    n: usize,
    m: usize,
    x: f64,
    out: *mut f64,
) -> QstancuStatus {
    guard(|| {
        let p = deref!(params, "params");
        out!(out, "out");
        *out = tri!(moment_closed_form(&p.inner, n, m, &x));
        QstancuStatus::Ok
    })
}

/// `S_inf(f; x)` and a bound on its error. The bound is infinite when `x`
/// was close enough to 1 to be evaluated as `f(1)`.
///
/// # Safety
/// `params` and `f` must be live handles; `value` and `tail_bound` must be
/// valid for one double each.
#[no_mangle]
pub unsafe extern "C" fn qstancu_limit_apply(
    params: *const QstancuParams,
    f: *const QstancuFunction,
    x: f64,
    tail_tol: f64,
    value: *mut f64,
    tail_bound: *mut f64,
) -> QstancuStatus {
    guard(|| {
        let p = deref!(params, "params");
        let f = deref!(f, "f");
        out!(value, "value");
        out!(tail_bound, "tail_bound");
        let r = tri!(limit_apply(&p.inner, &f.inner, &x, tail_tol));
        *value = r.value;
        *tail_bound = r.tail_bound;
        QstancuStatus::Ok
    })
}

/// `S_inf(e_m; x)` from its finite closed form.
///
/// # Safety
/// `params` must be a live handle; `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn qstancu_limit_moment(
    params: *const QstancuParams,
    m: usize,
    x: f64,
    out: *mut f64,
) -> QstancuStatus {
    guard(|| {
        let p = deref!(params, "params");
        out!(out, "out");
        *out = tri!(limit_moment_general(&p.inner, m, &x));
        QstancuStatus::Ok
    })
}

/// Truncated `(a; q)_inf` for `a` in `[0, 1]` with its error bound.
///
/// # Safety
/// `value` and `tail_bound` must be valid for one double each.
#[no_mangle]
pub unsafe extern "C" fn qstancu_q_pochhammer_infinite(
    a: f64,
    q: f64,
    tail_tol: f64,
    value: *mut f64,
    tail_bound: *mut f64,
) -> QstancuStatus {
    guard(|| {
        out!(value, "value");
        out!(tail_bound, "tail_bound");
        let (v, cert) = tri!(q_pochhammer_infinite(&a, &q, tail_tol));
        *value = v;
        *tail_bound = cert.tail_bound;
        QstancuStatus::Ok
    })
}

/// `S_n(f; x)` in exact rational arithmetic. `q`, `alpha` and `x` are
/// strings such as `"1/2"` or `"0.25"`; the result is written as a new
/// `"p/q"` string that must be released with [`qstancu_string_free`].
///
/// # Safety
/// The input pointers must be NUL-terminated strings; `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qstancu_apply_exact(
    q: *const c_char,
    alpha: *const c_char,
    n: usize,
    spec: *const c_char,
    x: *const c_char,
    out: *mut *mut c_char,
) -> QstancuStatus {
    guard(|| {
        out!(out, "out");
        let mut text = [""; 4];
        for (slot, (p, name)) in
            text.iter_mut()
                .zip([(q, "q"), (alpha, "alpha"), (spec, "spec"), (x, "x")])
        {
            *slot = match read_str(p, name) {
                Ok(s) => s,
                Err(s) => return s,
            };
        }
        let q: Rational = tri!(text[0].parse());
        let alpha: Rational = tri!(text[1].parse());
        let f: SampledFunction<Rational> = tri!(text[2].parse());
        let x: Rational = tri!(text[3].parse());
        let params = tri!(QParams::new(q, alpha));
        let v = tri!(apply(&params, n, &f, &x));
        *out = CString::new(v.to_string())
            .expect("no interior nul")
            .into_raw();
        QstancuStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qstancu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
