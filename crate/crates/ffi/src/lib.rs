//! C ABI for `nambu-core`.
//!
//! Algebras, twists and reports cross the boundary as opaque handles that the
//! caller frees with the matching `*_free` function. Every fallible call
//! returns a [`NambuStatus`]; on failure the message is available from
//! [`nambu_last_error`] on the same thread. Reports carry the same JSON
//! document the `nambu` binary prints.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nambu_core::cli::{self, AlgebraArgs, Outcome, TwistArgs};
use nambu_core::jacobian::SampleConfig;
use nambu_core::morphisms::ConstraintSource;
use nambu_core::scalar::parse_scalar;
use nambu_core::ternary::{Algebra, QParam, TwistPair};
use nambu_core::Error;

/// Result of every fallible call. `NAMBU_STATUS_OK` and
/// `NAMBU_STATUS_VIOLATIONS` both produce a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NambuStatus {
    Ok = 0,
    /// The computation finished and found a failed check.
    Violations = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    Parse = 4,
    UnknownName = 5,
    /// A value outside the domain: zero `q`, a singular coefficient, an
    /// unbound symbol.
    InvalidValue = 6,
    Precondition = 7,
    /// A Rust panic was caught at the boundary. Handles passed to the call
    /// stay valid.
    Internal = 8,
}

/// Inclusive degree window `lo..=hi`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NambuWindow {
    pub lo: i64,
    pub hi: i64,
}

/// A ternary algebra together with its `q` choice.
pub struct NambuAlgebra {
    algebra: Algebra,
    q: QParam,
}

pub struct NambuTwist {
    pair: TwistPair,
}

/// A finished report. The strings live as long as the handle.
pub struct NambuReport {
    json: CString,
    text: CString,
    clean: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: NambuStatus,
    message: String,
}

impl Failure {
    fn new(status: NambuStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => NambuStatus::Parse,
            Error::UnknownName { .. } | Error::UnknownFamily { .. } => NambuStatus::UnknownName,
            Error::ZeroQ
            | Error::DivisionByZero
            | Error::NotInvertible(_)
            | Error::NonConstantQPower(_)
            | Error::UnboundSymbol(_) => NambuStatus::InvalidValue,
            Error::Precondition(_)
            | Error::NotEndomorphism { .. }
            | Error::NotUntwistable { .. } => NambuStatus::Precondition,
        };
        Failure::new(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_last_error(message: Option<&str>) {
    // interior NULs cannot reach C, so they are replaced
    let c = message.map(|m| CString::new(m.replace('\0', "?")).expect("NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f` behind a panic guard and records its error message.
fn guard(f: impl FnOnce() -> FfiResult<NambuStatus>) -> NambuStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let detail = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::new(
            NambuStatus::Internal,
            format!("internal error: {detail}"),
        ))
    });
    match result {
        Ok(status) => {
            set_last_error(None);
            status
        }
        Err(failure) => {
            set_last_error(Some(&failure.message));
            failure.status
        }
    }
}

/// Borrows a required C string.
unsafe fn required<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::new(
            NambuStatus::NullArgument,
            format!("{what} is NULL"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(NambuStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// NULL maps to the `symbolic` keyword.
unsafe fn optional(p: *const c_char, what: &'static str) -> FfiResult<String> {
    if p.is_null() {
        Ok("symbolic".into())
    } else {
        required(p, what).map(str::to_owned)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure::new(NambuStatus::NullArgument, format!("{what} is NULL")))
}

fn window_range(w: NambuWindow) -> FfiResult<std::ops::RangeInclusive<i64>> {
    if w.lo > w.hi {
        return Err(Failure::new(
            NambuStatus::InvalidValue,
            format!("window {}..{} is empty", w.lo, w.hi),
        ));
    }
    Ok(w.lo..=w.hi)
}

/// NULL selects symbolic extraction.
unsafe fn source(window: *const NambuWindow) -> FfiResult<ConstraintSource> {
    match window.as_ref() {
        None => Ok(ConstraintSource::Symbolic),
        Some(w) => Ok(ConstraintSource::Window(window_range(*w)?)),
    }
}

/// Stores `value` through `out`, which must be non-NULL.
unsafe fn emit<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::new(
            NambuStatus::NullArgument,
            "output pointer is NULL",
        ));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn emit_report(out: *mut *mut NambuReport, outcome: Outcome) -> FfiResult<NambuStatus> {
    let status = if outcome.clean {
        NambuStatus::Ok
    } else {
        NambuStatus::Violations
    };
    let to_c = |s: String| {
        CString::new(s).map_err(|_| Failure::new(NambuStatus::Internal, "report contains NUL"))
    };
    let report = NambuReport {
        json: to_c(outcome.report.to_string())?,
        text: to_c(outcome.text)?,
        clean: outcome.clean,
    };
    emit(out, report)?;
    Ok(status)
}

/// Clears `*out` up front so callers never see a stale handle after failure.
unsafe fn clear<T>(out: *mut *mut T) {
    if !out.is_null() {
        *out = ptr::null_mut();
    }
}

/// Message of the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn nambu_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated crate version.
#[no_mangle]
pub extern "C" fn nambu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `cfz`, `qvw` or `witt`. NULL `z` or `q` leaves the parameter
/// free; otherwise they are numbers such as `"2i"` or `"1/3"`.
///
/// # Safety
/// String arguments must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nambu_algebra_new(
    name: *const c_char,
    z: *const c_char,
    q: *const c_char,
    out: *mut *mut NambuAlgebra,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let args = AlgebraArgs {
            algebra: required(name, "name")?.to_owned(),
            z: optional(z, "z")?,
            q: optional(q, "q")?,
        };
        let (algebra, q) = args.build()?;
        emit(out, NambuAlgebra { algebra, q })?;
        Ok(NambuStatus::Ok)
    })
}

/// # Safety
/// `algebra` must be NULL or a handle from [`nambu_algebra_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nambu_algebra_free(algebra: *mut NambuAlgebra) {
    if !algebra.is_null() {
        drop(Box::from_raw(algebra));
    }
}

/// Builds an `identity`, `scaling` or `beta` twist for `algebra`. `p1` and
/// `p2` are the two twist parameters; NULL leaves one free.
///
/// # Safety
/// `algebra` must be a live handle; strings as for [`nambu_algebra_new`].
#[no_mangle]
pub unsafe extern "C" fn nambu_twist_new(
    algebra: *const NambuAlgebra,
    kind: *const c_char,
    p1: *const c_char,
    p2: *const c_char,
    out: *mut *mut NambuTwist,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let a = handle(algebra, "algebra")?;
        let kind = required(kind, "kind")?;
        let (p1, p2) = (optional(p1, "p1")?, optional(p2, "p2")?);
        let args = TwistArgs {
            twist: kind.to_owned(),
            lambda1: p1.clone(),
            lambda2: p2.clone(),
            beta1: p1,
            beta2: p2,
        };
        let pair = args.build(&a.algebra, &a.q)?.ok_or_else(|| {
            Failure::new(
                NambuStatus::UnknownName,
                format!("twist `{kind}` has no handle; pass NULL instead"),
            )
        })?;
        emit(out, NambuTwist { pair })?;
        Ok(NambuStatus::Ok)
    })
}

/// # Safety
/// `twist` must be NULL or a handle from [`nambu_twist_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nambu_twist_free(twist: *mut NambuTwist) {
    if !twist.is_null() {
        drop(Box::from_raw(twist));
    }
}

/// Checks the fundamental identity, or its twisted form when `twist` is
/// non-NULL. A NULL `window` checks with symbolic degrees.
///
/// # Safety
/// Handles must be live or NULL where allowed; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nambu_verify(
    algebra: *const NambuAlgebra,
    twist: *const NambuTwist,
    window: *const NambuWindow,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let a = handle(algebra, "algebra")?;
        let t = twist.as_ref().map(|t| &t.pair);
        emit_report(out, cli::verify_outcome(&a.algebra, t, &source(window)?)?)
    })
}

/// Classifies the 2×2 twist ansatz on `algebra`.
///
/// # Safety
/// As for [`nambu_verify`].
#[no_mangle]
pub unsafe extern "C" fn nambu_classify(
    algebra: *const NambuAlgebra,
    window: *const NambuWindow,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let a = handle(algebra, "algebra")?;
        emit_report(out, cli::classify_outcome(&a.algebra, &source(window)?)?)
    })
}

/// Solves for endomorphisms of `algebra`.
///
/// # Safety
/// As for [`nambu_verify`].
#[no_mangle]
pub unsafe extern "C" fn nambu_solve_endo(
    algebra: *const NambuAlgebra,
    window: *const NambuWindow,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let a = handle(algebra, "algebra")?;
        emit_report(out, cli::solve_endo_outcome(&a.algebra, &source(window)?)?)
    })
}

/// Untwists `algebra` by `twist`. A twist that cannot be undone yields
/// `NAMBU_STATUS_VIOLATIONS` and a report with the reason.
///
/// # Safety
/// As for [`nambu_verify`]; `twist` is required.
#[no_mangle]
pub unsafe extern "C" fn nambu_untwist(
    algebra: *const NambuAlgebra,
    twist: *const NambuTwist,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let a = handle(algebra, "algebra")?;
        let t = handle(twist, "twist")?;
        emit_report(out, cli::untwist_outcome(&a.algebra, &t.pair)?)
    })
}

/// Checks the differential-operator realization at rational `lambda`, with
/// numeric recovery on `window` to tolerance `tol`.
///
/// # Safety
/// `lambda` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nambu_realize(
    lambda: *const c_char,
    window: NambuWindow,
    tol: f64,
    scan: bool,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let text = required(lambda, "lambda")?;
        let lambda = parse_scalar(text)?.as_constant().ok_or_else(|| {
            Failure::new(
                NambuStatus::Parse,
                format!("lambda must be a number, got `{text}`"),
            )
        })?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::new(
                NambuStatus::InvalidValue,
                "tol must be positive",
            ));
        }
        emit_report(
            out,
            cli::realize_outcome(&lambda, window_range(window)?, tol, scan)?,
        )
    })
}

/// Samples the polynomial Jacobian bracket under the named substitution.
///
/// # Safety
/// `gamma` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nambu_jacobian_demo(
    gamma: *const c_char,
    samples: usize,
    degree: u32,
    bound: i64,
    seed: u64,
    out: *mut *mut NambuReport,
) -> NambuStatus {
    clear(out);
    guard(|| {
        let gamma = required(gamma, "gamma")?;
        let config = SampleConfig {
            samples,
            degree,
            bound,
            seed,
        };
        emit_report(out, cli::jacobian_outcome(gamma, config)?)
    })
}

/// The report as compact JSON, owned by `report`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nambu_report_json(report: *const NambuReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// The human-readable rendering, owned by `report`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nambu_report_text(report: *const NambuReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` must be a live handle or NULL (which reads as not clean).
#[no_mangle]
pub unsafe extern "C" fn nambu_report_clean(report: *const NambuReport) -> bool {
    report.as_ref().is_some_and(|r| r.clean)
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nambu_report_free(report: *mut NambuReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
