//! C interface to `goldberg-core`.
//!
//! Every fallible call returns a [`GoldbergStatus`] and writes results through
//! out-pointers. Objects that own state are exposed as opaque handles that the
//! caller releases with the matching `*_free` function. After a failure,
//! [`goldberg_last_error`] copies a message for the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use goldberg_core::a0_solver::{self, A0Options};
use goldberg_core::lame::{CoveringEvaluator, Puncture};
use goldberg_core::mu_pipeline::{self, PipelineConfig};
use goldberg_core::schwarz;
use goldberg_core::word_algebra::{self, CyclicWord, Word};
use goldberg_core::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldbergStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    NoConvergence = 5,
    Budget = 6,
    /// The integer result does not fit the output type.
    Overflow = 7,
    /// The output buffer is too small; the required size was written.
    BufferTooSmall = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> GoldbergStatus {
    match e {
        Error::Parse(_) => GoldbergStatus::Parse,
        Error::Domain(_) => GoldbergStatus::Domain,
        Error::NoConvergence(_) => GoldbergStatus::NoConvergence,
        Error::Budget(_) => GoldbergStatus::Budget,
    }
}

fn guard(f: impl FnOnce() -> Result<(), GoldbergStatus>) -> GoldbergStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GoldbergStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            GoldbergStatus::Panic
        }
    }
}

fn fail(e: Error) -> GoldbergStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(name: &str) -> GoldbergStatus {
    set_error(format!("{name} is null"));
    GoldbergStatus::NullPointer
}

unsafe fn write_string(
    s: &str,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> Result<(), GoldbergStatus> {
    let bytes = s.as_bytes();
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() || len < bytes.len() + 1 {
        set_error(format!("buffer needs {} bytes", bytes.len() + 1));
        return Err(GoldbergStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

fn config(tol: f64) -> PipelineConfig {
    if tol > 0.0 {
        PipelineConfig::with_tol(tol)
    } else {
        PipelineConfig::default()
    }
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string. `needed` (optional) receives the size required.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes; `needed` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn goldberg_last_error(
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> GoldbergStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    guard(|| write_string(&msg, buf, len, needed))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn goldberg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// A parsed word together with its cyclic normal form.
pub struct GoldbergWord {
    word: Word,
    cyclic: CyclicWord,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GoldbergWordStats {
    pub length: u64,
    pub n0: i64,
    pub n1: i64,
    pub k: u64,
}

/// Parses a word such as `"A^2 B^-1 A"` into a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
/// The handle must be released with [`goldberg_word_free`].
#[no_mangle]
pub unsafe extern "C" fn goldberg_word_parse(
    text: *const c_char,
    out: *mut *mut GoldbergWord,
) -> GoldbergStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not UTF-8");
            GoldbergStatus::InvalidUtf8
        })?;
        let word = word_algebra::parse_word(s).map_err(fail)?;
        let cyclic = word_algebra::canonical_cyclic(&word).map_err(fail)?;
        *out = Box::into_raw(Box::new(GoldbergWord { word, cyclic }));
        Ok(())
    })
}

/// Releases a word handle. Null is ignored.
///
/// # Safety
/// `word` must be null or a handle from [`goldberg_word_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn goldberg_word_free(word: *mut GoldbergWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Trace of the word's matrix. Fails with `Overflow` beyond 64 bits.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_word_trace(
    word: *const GoldbergWord,
    out: *mut i64,
) -> GoldbergStatus {
    guard(|| {
        let w = word.as_ref().ok_or_else(|| null("word"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = w.word.to_matrix().trace();
        *out = i64::try_from(&t).map_err(|_| {
            set_error(format!("trace {t} does not fit in 64 bits"));
            GoldbergStatus::Overflow
        })?;
        Ok(())
    })
}

/// Length, exponent sums and syllable-pair count of the cyclic word.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_word_stats(
    word: *const GoldbergWord,
    out: *mut GoldbergWordStats,
) -> GoldbergStatus {
    guard(|| {
        let w = word.as_ref().ok_or_else(|| null("word"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = word_algebra::stats(&w.cyclic);
        *out = GoldbergWordStats {
            length: s.length,
            n0: s.n0,
            n1: s.n1,
            k: s.k as u64,
        };
        Ok(())
    })
}

/// Canonical cyclic form as text.
///
/// # Safety
/// `word` must be a live handle, `buf` null or valid for `len` bytes, and
/// `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn goldberg_word_canonical(
    word: *const GoldbergWord,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> GoldbergStatus {
    guard(|| {
        let w = word.as_ref().ok_or_else(|| null("word"))?;
        write_string(&w.cyclic.to_string(), buf, len, needed)
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GoldbergA0 {
    pub t_min: i64,
    pub a0: f64,
    pub words_examined: u64,
}

/// Exact minimal trace and A0 for the index pair. `force` lifts the search
/// size guard.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_a0(
    n0: i64,
    n1: i64,
    force: bool,
    out: *mut GoldbergA0,
) -> GoldbergStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = a0_solver::exact_a0_with(
            n0,
            n1,
            A0Options {
                force,
                ..A0Options::default()
            },
        )
        .map_err(fail)?;
        let t_min = i64::try_from(&r.t_min).map_err(|_| GoldbergStatus::Overflow)?;
        *out = GoldbergA0 {
            t_min,
            a0: r.a0,
            words_examined: r.words_examined,
        };
        Ok(())
    })
}

/// Harmonic measure at 0 of the left circle for radius `r`, with the
/// alternating-series error bound.
///
/// # Safety
/// `value` and `error_bound` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn goldberg_omega0(
    r: f64,
    tol: f64,
    value: *mut f64,
    error_bound: *mut f64,
) -> GoldbergStatus {
    guard(|| {
        if value.is_null() || error_bound.is_null() {
            return Err(null("output"));
        }
        let e = schwarz::omega0(r, tol).map_err(fail)?;
        *value = e.value;
        *error_bound = e.error_bound;
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GoldbergMu {
    pub p: f64,
    pub r: f64,
    pub omega0: f64,
    pub omega0_error: f64,
    pub a: f64,
    pub q: f64,
    pub mu: f64,
}

/// `mu_{m,n}`. A non-positive `tol` selects the default.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_mu(
    m: i64,
    n: i64,
    tol: f64,
    out: *mut GoldbergMu,
) -> GoldbergStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = mu_pipeline::mu(m, n, &config(tol)).map_err(fail)?;
        *out = GoldbergMu {
            p: r.p,
            r: r.r,
            omega0: r.omega0.value,
            omega0_error: r.omega0.error_bound,
            a: r.a,
            q: r.q,
            mu: r.mu,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GoldbergChocolate {
    pub s0: f64,
    pub tstar_lower: f64,
    pub delta_star_upper: f64,
    pub hempel_smith_tstar: f64,
}

/// Chocolate-problem bounds.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_chocolate(
    tol: f64,
    out: *mut GoldbergChocolate,
) -> GoldbergStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = mu_pipeline::chocolate(&config(tol)).map_err(fail)?;
        *out = GoldbergChocolate {
            s0: c.s0,
            tstar_lower: c.tstar_lower,
            delta_star_upper: c.delta_star_upper,
            hempel_smith_tstar: c.hempel_smith_tstar,
        };
        Ok(())
    })
}

/// A built covering map `h_{m,n}`; safe to share between threads for
/// evaluation.
pub struct GoldbergCovering {
    inner: CoveringEvaluator,
}

/// Builds `h_{m,n}`. A non-positive `tol` selects the default.
///
/// # Safety
/// `out` must be a valid pointer. The handle must be released with
/// [`goldberg_covering_free`].
#[no_mangle]
pub unsafe extern "C" fn goldberg_covering_new(
    m: i64,
    n: i64,
    tol: f64,
    out: *mut *mut GoldbergCovering,
) -> GoldbergStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = CoveringEvaluator::new(m, n, &config(tol)).map_err(fail)?;
        *out = Box::into_raw(Box::new(GoldbergCovering { inner }));
        Ok(())
    })
}

/// Releases a covering handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`goldberg_covering_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn goldberg_covering_free(h: *mut GoldbergCovering) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The puncture parameter `mu` of the covering.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn goldberg_covering_mu(
    h: *const GoldbergCovering,
    out: *mut f64,
) -> GoldbergStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("h"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = h.inner.mu_value();
        Ok(())
    })
}

/// Evaluates `h(re + i im)`. `puncture` (optional) receives 0 off the
/// punctures, 1 near `-mu` (value 0) and 2 near `mu` (value 1).
///
/// # Safety
/// `h` must be a live handle; `out_re`, `out_im` valid pointers; `puncture`
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn goldberg_covering_eval(
    h: *const GoldbergCovering,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    puncture: *mut i32,
) -> GoldbergStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("h"))?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output"));
        }
        let v = h.inner.eval(Complex64::new(re, im)).map_err(fail)?;
        *out_re = v.value.re;
        *out_im = v.value.im;
        if !puncture.is_null() {
            *puncture = match v.puncture {
                None => 0,
                Some(Puncture::Zero) => 1,
                Some(Puncture::One) => 2,
            };
        }
        Ok(())
    })
}
