//! C ABI over `qlap`.
//!
//! Handles are opaque and owned by the caller, who releases them with the matching
//! `_free`. Every entry point returns a [`QlapStatus`]; on failure the message is
//! available from [`qlap_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qlap::cyclo::{CycElt, RootSpec};
use qlap::error::Error;
use qlap::invariants::{self, HabiroElem, SurgeryPresentation};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Inadmissible = 3,
    Internal = 4,
    Panic = 5,
}

/// A surgery presentation.
pub struct QlapManifold(SurgeryPresentation);

/// A truncated universal series.
pub struct QlapSeries(HabiroElem);

/// An exact value in a cyclotomic field.
pub struct QlapValue(CycElt);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QlapStatus {
    match e.exit_code() {
        2 => QlapStatus::InvalidInput,
        3 => QlapStatus::Inadmissible,
        _ => QlapStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), (QlapStatus, String)>>(f: F) -> QlapStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlapStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside qlap");
            QlapStatus::Panic
        }
    }
}

fn fail<E: Into<Error>>(e: E) -> (QlapStatus, String) {
    let e = e.into();
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QlapStatus, String) {
    (QlapStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QlapStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QlapStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (QlapStatus, String)> {
    let c = CString::new(s).map_err(|_| (QlapStatus::Internal, "interior NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// The message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next qlap call on the same thread.
#[no_mangle]
pub extern "C" fn qlap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from a qlap `_to_json` call, or be null.
#[no_mangle]
pub unsafe extern "C" fn qlap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Looks up a built-in manifold. `b` is read only for `lens-b-1`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_manifold_builtin(
    name: *const c_char,
    b: i64,
    out: *mut *mut QlapManifold,
) -> QlapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let b = (name == "lens-b-1").then_some(b);
        let m = invariants::builtin(name, b).map_err(fail)?;
        *out = Box::into_raw(Box::new(QlapManifold(m)));
        Ok(())
    })
}

/// Parses a manifold from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_manifold_from_json(
    json: *const c_char,
    out: *mut *mut QlapManifold,
) -> QlapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = invariants::manifold_from_json(read_str(json, "json")?).map_err(fail)?;
        *out = Box::into_raw(Box::new(QlapManifold(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from a qlap constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn qlap_manifold_free(m: *mut QlapManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// The first `terms` coefficients of the universal series of `m`.
///
/// # Safety
/// `m` must be a live manifold handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_series_compute(
    m: *const QlapManifold,
    terms: usize,
    out: *mut *mut QlapSeries,
) -> QlapStatus {
    guard(|| {
        if m.is_null() {
            return Err(null("manifold"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = invariants::universal_series(&(*m).0, terms).map_err(fail)?;
        *out = Box::into_raw(Box::new(QlapSeries(s)));
        Ok(())
    })
}

/// The series as JSON; release with [`qlap_string_free`].
///
/// # Safety
/// `s` must be a live series handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_series_to_json(
    s: *const QlapSeries,
    out: *mut *mut c_char,
) -> QlapStatus {
    guard(|| {
        if s.is_null() {
            return Err(null("series"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(serde_json::to_string(&(*s).0).map_err(fail)?, out)
    })
}

/// # Safety
/// `s` must come from [`qlap_series_compute`], or be null.
#[no_mangle]
pub unsafe extern "C" fn qlap_series_free(s: *mut QlapSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// τ' of `m` at v = ζ_order^primitive. `refined` is 0 or 1 for a refinement, −1 for none.
///
/// # Safety
/// `m` must be a live manifold handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_value_eval(
    m: *const QlapManifold,
    order: u32,
    primitive: i64,
    refined: i32,
    out: *mut *mut QlapValue,
) -> QlapStatus {
    guard(|| {
        if m.is_null() {
            return Err(null("manifold"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let refined = match refined {
            -1 => None,
            0 | 1 => Some(refined as u8),
            _ => {
                return Err((
                    QlapStatus::InvalidInput,
                    "refined must be -1, 0 or 1".into(),
                ))
            }
        };
        let root = RootSpec::new(order, primitive).map_err(fail)?;
        let x = invariants::evaluate(&(*m).0, root, refined).map_err(fail)?;
        *out = Box::into_raw(Box::new(QlapValue(x)));
        Ok(())
    })
}

/// The value as JSON; release with [`qlap_string_free`].
///
/// # Safety
/// `x` must be a live value handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_value_to_json(
    x: *const QlapValue,
    out: *mut *mut c_char,
) -> QlapStatus {
    guard(|| {
        if x.is_null() {
            return Err(null("value"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(serde_json::to_string(&(*x).0).map_err(fail)?, out)
    })
}

/// Writes 1 to `out` when the value is an algebraic integer, 0 otherwise.
///
/// # Safety
/// `x` must be a live value handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlap_value_is_algebraic_integer(
    x: *const QlapValue,
    out: *mut i32,
) -> QlapStatus {
    guard(|| {
        if x.is_null() {
            return Err(null("value"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = (*x).0.is_algebraic_integer() as i32;
        Ok(())
    })
}

/// # Safety
/// `x` must come from [`qlap_value_eval`], or be null.
#[no_mangle]
pub unsafe extern "C" fn qlap_value_free(x: *mut QlapValue) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}
