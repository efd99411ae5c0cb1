//! C ABI for the quantum-algebra discriminant library: opaque document
//! handles, integer status codes mirroring the CLI exit codes, and JSON
//! strings for every report. All strings returned through out-pointers
//! are heap-allocated and must be released with `qalg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qalg::center::build_center_report;
use qalg::clifford::{diagonalize, generic_clifford, QuadraticForm};
use qalg::closure::certify_dds_full;
use qalg::discr::{closed_form, verify_formula, ClosedFormKind};
use qalg::expr::{eval_polynomial, EvalContext};
use qalg::input::{AlgKind, Document};
use qalg::session;
use qalg::{report, Limits};

/// Status codes; nonzero values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QalgStatus {
    Ok = 0,
    ParseError = 1,
    HypothesisError = 2,
    Mismatch = 3,
    ClosureUnknown = 4,
    NullArgument = 5,
    InternalError = 6,
}

/// Which discriminant route to run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QalgMethod {
    Brute = 0,
    Formula = 1,
}

/// Closed-form selector for verification.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QalgFormula {
    Auto = 0,
    SkewMonomial = 1,
    QWeyl = 2,
    QWeylBounded = 3,
    CliffordDet = 4,
}

/// An opaque parsed document plus its session limits.
pub struct QalgDocument {
    doc: Document,
    limits: Limits,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

/// The last error message on this thread; valid until the next failing
/// call on the same thread. Never NULL.
#[no_mangle]
pub extern "C" fn qalg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qalg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn out_string(out: *mut *mut c_char, s: String) -> QalgStatus {
    let sanitized = s.replace('\0', " ");
    match CString::new(sanitized) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            QalgStatus::Ok
        }
        Err(_) => {
            set_error("report contained an interior NUL");
            QalgStatus::InternalError
        }
    }
}

fn session_status(e: &session::SessionError) -> QalgStatus {
    match e.class {
        session::FailureClass::Parse => QalgStatus::ParseError,
        session::FailureClass::Hypothesis => QalgStatus::HypothesisError,
    }
}

fn guarded<F: FnOnce() -> QalgStatus>(f: F) -> QalgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            QalgStatus::InternalError
        }
    }
}

/// Parses an `.alg` document from a NUL-terminated UTF-8 string.
///
/// # Safety
/// `text` must point to a valid NUL-terminated string and `out` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_document_parse(
    text: *const c_char,
    out: *mut *mut QalgDocument,
) -> QalgStatus {
    if text.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let raw = match CStr::from_ptr(text).to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("document is not valid UTF-8");
                return QalgStatus::ParseError;
            }
        };
        match session::parse_document(raw) {
            Ok((doc, limits)) => {
                *out = Box::into_raw(Box::new(QalgDocument { doc, limits }));
                QalgStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                session_status(&e)
            }
        }
    })
}

/// Releases a document handle.
///
/// # Safety
/// `doc` must come from `qalg_document_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qalg_document_free(doc: *mut QalgDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Releases a string returned through any out-pointer here.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical rendering of the parsed document.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_document_render(
    doc: *const QalgDocument,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| out_string(out, (*doc).doc.render()))
}

/// Center analysis as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_center_json(
    doc: *const QalgDocument,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        match handle.doc.kind {
            AlgKind::Skew | AlgKind::Weyl | AlgKind::QWeyl => {}
            _ => {
                set_error("center analysis applies to skew, weyl and q-weyl documents");
                return QalgStatus::HypothesisError;
            }
        }
        match build_center_report(&handle.doc.q) {
            Ok(r) => {
                let value = report::center_json(&r, &handle.doc.names);
                out_string(out, serde_json::to_string_pretty(&value).unwrap())
            }
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

/// Discriminant report as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_discriminant_json(
    doc: *const QalgDocument,
    method: QalgMethod,
    factor: bool,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        let pres = match session::presentation(&handle.doc, &handle.limits) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let (fm, _) = match session::module_data(&handle.doc, &pres, &handle.limits) {
            Ok(x) => x,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let result = match method {
            QalgMethod::Brute => fm.brute_discriminant(),
            QalgMethod::Formula => match session::auto_formula(&handle.doc, &pres) {
                Ok(kind) => closed_form(&fm, kind),
                Err(e) => {
                    set_error(&e.to_string());
                    return session_status(&e);
                }
            },
        };
        match result {
            Ok(d) => {
                let doc_d = report::discriminant_doc(&d, fm.rank(), factor);
                out_string(
                    out,
                    serde_json::to_string_pretty(&serde_json::json!({
                        "kind": "discriminant-report",
                        "results": [doc_d],
                    }))
                    .unwrap(),
                )
            }
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

fn formula_kind(
    handle: &QalgDocument,
    pres: &std::sync::Arc<qalg::algebra::Presentation>,
    formula: QalgFormula,
) -> Result<ClosedFormKind, session::SessionError> {
    match formula {
        QalgFormula::Auto => session::auto_formula(&handle.doc, pres),
        QalgFormula::SkewMonomial => Ok(ClosedFormKind::SkewMonomial),
        QalgFormula::QWeyl => Ok(ClosedFormKind::TwoGenWeyl),
        QalgFormula::QWeylBounded => Ok(ClosedFormKind::TwoGenWeylBounded),
        QalgFormula::CliffordDet => Ok(ClosedFormKind::CliffordDet),
    }
}

/// Runs the oracle against a closed form; `Ok` on a match, `Mismatch`
/// otherwise. The JSON report lands in `out` either way.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_verify_json(
    doc: *const QalgDocument,
    formula: QalgFormula,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        let pres = match session::presentation(&handle.doc, &handle.limits) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let (fm, _) = match session::module_data(&handle.doc, &pres, &handle.limits) {
            Ok(x) => x,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let kind = match formula_kind(handle, &pres, formula) {
            Ok(k) => k,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        match verify_formula(&fm, kind) {
            Ok(r) => {
                let doc_v = report::verify_doc(&r);
                let status = if r.matched {
                    QalgStatus::Ok
                } else {
                    QalgStatus::Mismatch
                };
                let s = serde_json::to_string_pretty(&doc_v).unwrap();
                let emitted = out_string(out, s);
                if emitted != QalgStatus::Ok {
                    emitted
                } else {
                    status
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

/// Divisor-closure certification as JSON; `Ok` when certified-full,
/// `ClosureUnknown` otherwise. `substitutions` is an optional
/// semicolon-separated list of `var=polynomial` rewrites applied to the
/// discriminant first; pass NULL for none. `max_rounds = 0` uses the
/// session default.
///
/// # Safety
/// `doc` must be a live handle, `substitutions` NULL or NUL-terminated,
/// `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_closure_json(
    doc: *const QalgDocument,
    max_rounds: u32,
    substitutions: *const c_char,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        let pres = match session::presentation(&handle.doc, &handle.limits) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let (fm, _) = match session::module_data(&handle.doc, &pres, &handle.limits) {
            Ok(x) => x,
            Err(e) => {
                set_error(&e.to_string());
                return session_status(&e);
            }
        };
        let disc = match handle.doc.kind {
            AlgKind::Clifford | AlgKind::GenericClifford => {
                closed_form(&fm, ClosedFormKind::CliffordDet)
            }
            _ => fm.brute_discriminant(),
        };
        let disc = match disc {
            Ok(d) => d,
            Err(e) => {
                set_error(&e.to_string());
                return QalgStatus::HypothesisError;
            }
        };
        let table = fm.center_table().clone();
        let mut value = disc.value.clone();
        if !substitutions.is_null() {
            let subs = match CStr::from_ptr(substitutions).to_str() {
                Ok(s) => s,
                Err(_) => {
                    set_error("substitutions are not valid UTF-8");
                    return QalgStatus::ParseError;
                }
            };
            for sub in subs.split(';').filter(|s| !s.trim().is_empty()) {
                let (lhs, rhs) = match sub.split_once('=') {
                    Some(p) => p,
                    None => {
                        set_error("substitutions look like `var=polynomial`");
                        return QalgStatus::ParseError;
                    }
                };
                let var = match table.index_of(lhs.trim()) {
                    Some(v) => v,
                    None => {
                        set_error(&format!("unknown variable `{}`", lhs.trim()));
                        return QalgStatus::ParseError;
                    }
                };
                let ctx = EvalContext::plain(table.clone(), handle.doc.conductor);
                let replacement = match eval_polynomial(rhs.trim(), &ctx) {
                    Ok(p) => p,
                    Err(e) => {
                        set_error(&e.to_string());
                        return QalgStatus::ParseError;
                    }
                };
                value = value.substitute(var, &replacement);
            }
        }
        let rounds = if max_rounds == 0 {
            handle.limits.max_rounds
        } else {
            max_rounds
        };
        match certify_dds_full(&pres, &table, &value, rounds) {
            Ok(outcome) => {
                let doc_c = report::closure_doc(&outcome);
                let status = if outcome.is_certified() {
                    QalgStatus::Ok
                } else {
                    QalgStatus::ClosureUnknown
                };
                let emitted = out_string(out, serde_json::to_string_pretty(&doc_c).unwrap());
                if emitted != QalgStatus::Ok {
                    emitted
                } else {
                    status
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

/// Stage-by-stage diagonalization of the quadratic form, as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_diagonalize_json(
    doc: *const QalgDocument,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        let qf = match handle.doc.kind {
            AlgKind::Clifford => {
                QuadraticForm::new(handle.doc.bilinear_matrix().expect("clifford"))
            }
            AlgKind::GenericClifford => {
                Ok(handle.doc.generic_spec().expect("generic").quadratic_form())
            }
            _ => {
                set_error("diagonalization applies to clifford documents");
                return QalgStatus::HypothesisError;
            }
        };
        let qf = match qf {
            Ok(q) => q,
            Err(e) => {
                set_error(&e.to_string());
                return QalgStatus::HypothesisError;
            }
        };
        match diagonalize(&qf) {
            Ok(trace) => out_string(
                out,
                serde_json::to_string_pretty(&report::diagonalize_doc(&trace)).unwrap(),
            ),
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

/// Graded dimension series with the enumeration cross-check, as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn qalg_hilbert_json(
    doc: *const QalgDocument,
    max_degree: u32,
    out: *mut *mut c_char,
) -> QalgStatus {
    if doc.is_null() || out.is_null() {
        return QalgStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*doc;
        if handle.doc.kind != AlgKind::GenericClifford {
            set_error("the series check applies to generic-clifford documents");
            return QalgStatus::HypothesisError;
        }
        match generic_clifford(
            handle.doc.n,
            &handle.doc.excluded,
            max_degree as usize,
            &handle.limits,
        ) {
            Ok(r) => {
                let doc_h = report::hilbert_doc(&r);
                let status = if doc_h.all_match {
                    QalgStatus::Ok
                } else {
                    QalgStatus::Mismatch
                };
                let emitted =
                    out_string(out, serde_json::to_string_pretty(&doc_h).unwrap());
                if emitted != QalgStatus::Ok {
                    emitted
                } else {
                    status
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                QalgStatus::HypothesisError
            }
        }
    })
}

#[allow(unused)]
fn assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<QalgDocument>();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_values_are_stable() {
        assert_eq!(QalgStatus::Ok as i32, 0);
        assert_eq!(QalgStatus::ParseError as i32, 1);
        assert_eq!(QalgStatus::HypothesisError as i32, 2);
        assert_eq!(QalgStatus::Mismatch as i32, 3);
        assert_eq!(QalgStatus::ClosureUnknown as i32, 4);
    }
}
