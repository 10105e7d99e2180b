//! C ABI over `taumean`.
//!
//! Every fallible call returns a [`TmStatus`]; on failure the message is kept
//! per thread and read with [`tm_last_error_message`]. Handles are opaque and
//! released with their `_free` function. Panics never cross the boundary.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use taumean::arith::{build_spf_table, sigma, tau, SpfTable};
use taumean::constants::{core_constants, GEvaluator};
use taumean::special::{lambda_fn, omega, xi};
use taumean::theta::{rough_stats_with, theta_stats, BEnumerator, Ratio, SeqStats, ThetaRule};
use taumean::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Resource = 3,
    Domain = 4,
    Pole = 5,
    Solver = 6,
    Contour = 7,
    Config = 8,
    Scale = 9,
    Io = 10,
    /// A result does not fit the C type (e.g. a τ-sum above 2^64).
    Overflow = 11,
    Panic = 12,
}

/// Sequence selector for enumerations and statistics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmSequence {
    /// θ(n) = t·n; needs `t_num`/`t_den`.
    Dense = 0,
    /// θ(n) = σ(n) + 1.
    Practical = 1,
}

/// δ, λ₀ and λ₁.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmConstants {
    pub delta: f64,
    pub lambda0: f64,
    pub lambda1: f64,
}

/// Count, τ-sum and harmonic sum of a truncated sequence.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmStats {
    pub x: u64,
    pub count: u64,
    pub tau_sum: u64,
    pub harmonic: f64,
}

/// g(s) or g'(s) with its error estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmComplexValue {
    pub re: f64,
    pub im: f64,
    pub quad_err: f64,
    pub tail_bound: f64,
}

/// Smallest-prime-factor table.
pub struct TmSpfTable(SpfTable);

/// Truncated g(s) evaluator.
pub struct TmGEvaluator(GEvaluator);

/// Members of a sequence, ascending.
pub struct TmEnumeration(Vec<u64>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TmStatus {
    match e {
        Error::Range { .. } => TmStatus::Range,
        Error::Resource { .. } => TmStatus::Resource,
        Error::Domain(_) => TmStatus::Domain,
        Error::Pole { .. } => TmStatus::Pole,
        Error::Solver(_) => TmStatus::Solver,
        Error::Contour { .. } => TmStatus::Contour,
        Error::Config(_) => TmStatus::Config,
        Error::Scale { .. } => TmStatus::Scale,
        Error::Io(_) => TmStatus::Io,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Overflow(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TmStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            TmStatus::NullPointer
        }
        Ok(Err(Fail::Overflow(what))) => {
            set_error(format!("{what} does not fit in 64 bits"));
            TmStatus::Overflow
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TmStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// ω(u).
#[no_mangle]
pub unsafe extern "C" fn tm_omega(u: f64, out: *mut f64) -> TmStatus {
    guard(|| {
        *out_ref(out, "out")? = omega(u);
        Ok(())
    })
}

/// ξ(u).
#[no_mangle]
pub unsafe extern "C" fn tm_xi(u: f64, out: *mut f64) -> TmStatus {
    guard(|| {
        *out_ref(out, "out")? = xi(u);
        Ok(())
    })
}

/// λ(v).
#[no_mangle]
pub unsafe extern "C" fn tm_lambda(v: f64, out: *mut f64) -> TmStatus {
    guard(|| {
        *out_ref(out, "out")? = lambda_fn(v);
        Ok(())
    })
}

/// δ, λ₀ and λ₁ (computed once per process).
#[no_mangle]
pub unsafe extern "C" fn tm_core_constants(out: *mut TmConstants) -> TmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = core_constants()?;
        *out = TmConstants { delta: c.delta, lambda0: c.lambda0, lambda1: c.lambda1 };
        Ok(())
    })
}

/// New evaluator for g truncated at `v_trunc`.
#[no_mangle]
pub unsafe extern "C" fn tm_g_evaluator_new(v_trunc: f64, out: *mut *mut TmGEvaluator) -> TmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Box::into_raw(Box::new(TmGEvaluator(GEvaluator::new(v_trunc)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tm_g_evaluator_free(ev: *mut TmGEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// g(re + i im).
#[no_mangle]
pub unsafe extern "C" fn tm_g_eval(ev: *const TmGEvaluator, re: f64, im: f64, out: *mut TmComplexValue) -> TmStatus {
    guard(|| {
        let ev = in_ref(ev, "ev")?;
        let out = out_ref(out, "out")?;
        let g = ev.0.g_eval(Complex64::new(re, im))?;
        *out = TmComplexValue { re: g.value.re, im: g.value.im, quad_err: g.quad_err, tail_bound: g.tail_bound };
        Ok(())
    })
}

/// g'(re + i im).
#[no_mangle]
pub unsafe extern "C" fn tm_g_prime_eval(
    ev: *const TmGEvaluator,
    re: f64,
    im: f64,
    out: *mut TmComplexValue,
) -> TmStatus {
    guard(|| {
        let ev = in_ref(ev, "ev")?;
        let out = out_ref(out, "out")?;
        let g = ev.0.g_prime_eval(Complex64::new(re, im))?;
        *out = TmComplexValue { re: g.value.re, im: g.value.im, quad_err: g.quad_err, tail_bound: g.tail_bound };
        Ok(())
    })
}

/// Smallest-prime-factor table for 1..=limit.
#[no_mangle]
pub unsafe extern "C" fn tm_spf_table_new(limit: u64, out: *mut *mut TmSpfTable) -> TmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Box::into_raw(Box::new(TmSpfTable(build_spf_table(limit)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tm_spf_table_free(t: *mut TmSpfTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[no_mangle]
pub unsafe extern "C" fn tm_tau(t: *const TmSpfTable, n: u64, out: *mut u64) -> TmStatus {
    guard(|| {
        let t = in_ref(t, "table")?;
        *out_ref(out, "out")? = tau(n, &t.0)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tm_sigma(t: *const TmSpfTable, n: u64, out: *mut u64) -> TmStatus {
    guard(|| {
        let t = in_ref(t, "table")?;
        *out_ref(out, "out")? = sigma(n, &t.0)?;
        Ok(())
    })
}

fn rule_of(seq: TmSequence, t_num: u64, t_den: u64) -> Result<ThetaRule, Fail> {
    Ok(match seq {
        TmSequence::Practical => ThetaRule::practical(),
        TmSequence::Dense => ThetaRule::dense_ratio(Ratio::new(t_num, t_den)?)?,
    })
}

fn to_c_stats(s: SeqStats) -> Result<TmStats, Fail> {
    let tau_sum = u64::try_from(s.tau_sum).map_err(|_| Fail::Overflow("tau_sum"))?;
    Ok(TmStats { x: s.x, count: s.count, tau_sum, harmonic: s.harmonic })
}

/// Count, τ-sum and harmonic sum of the dense (t = t_num/t_den) or practical
/// sequence up to x. `t_num`/`t_den` are ignored for practical numbers.
#[no_mangle]
pub unsafe extern "C" fn tm_sequence_stats(
    seq: TmSequence,
    t_num: u64,
    t_den: u64,
    x: u64,
    out: *mut TmStats,
) -> TmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_c_stats(theta_stats(&rule_of(seq, t_num, t_den)?, x)?)?;
        Ok(())
    })
}

/// Φ(x, y), S(x, y) and the harmonic sum over y-rough n ≤ x, using `table`
/// (which must reach x).
#[no_mangle]
pub unsafe extern "C" fn tm_rough_stats(t: *const TmSpfTable, x: u64, y: f64, out: *mut TmStats) -> TmStatus {
    guard(|| {
        let t = in_ref(t, "table")?;
        let out = out_ref(out, "out")?;
        *out = to_c_stats(rough_stats_with(&t.0, x, y)?)?;
        Ok(())
    })
}

/// Members of the dense or practical sequence up to x, ascending.
#[no_mangle]
pub unsafe extern "C" fn tm_enumerate(
    seq: TmSequence,
    t_num: u64,
    t_den: u64,
    x: u64,
    out: *mut *mut TmEnumeration,
) -> TmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let members = BEnumerator::new(&rule_of(seq, t_num, t_den)?, x)?.collect_sorted()?;
        *out = Box::into_raw(Box::new(TmEnumeration(members)));
        Ok(())
    })
}

/// Number of members; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn tm_enumeration_len(e: *const TmEnumeration) -> usize {
    e.as_ref().map_or(0, |e| e.0.len())
}

/// Pointer to the members, valid until the handle is freed; NULL for NULL.
#[no_mangle]
pub unsafe extern "C" fn tm_enumeration_data(e: *const TmEnumeration) -> *const u64 {
    e.as_ref().map_or(ptr::null(), |e| e.0.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn tm_enumeration_free(e: *mut TmEnumeration) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}
