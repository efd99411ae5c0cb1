//! Exercises the C ABI through its extern functions: handle lifecycle,
//! status codes, JSON payloads and error reporting.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qalg_capi::*;

fn parse(text: &str) -> *mut QalgDocument {
    let c = CString::new(text).unwrap();
    let mut handle: *mut QalgDocument = ptr::null_mut();
    let status = unsafe { qalg_document_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, QalgStatus::Ok, "parse failed: {}", last_error());
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(qalg_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p).to_string_lossy().into_owned() };
    unsafe { qalg_string_free(p) };
    s
}

const SKEW6: &str = include_str!("../../core/tests/data/skew6.alg");
const QWEYL3: &str = include_str!("../../core/tests/data/qweyl_ord3.alg");
const FOUR_GEN_T: &str = include_str!("../../core/tests/data/four_gen_t.alg");
const CLIFFORD_CROSS: &str = include_str!("../../core/tests/data/clifford_cross.alg");
const GENERIC3: &str = include_str!("../../core/tests/data/generic_cliff3.alg");

#[test]
fn version_is_exposed() {
    let v = unsafe { CStr::from_ptr(qalg_version()) };
    assert!(!v.to_string_lossy().is_empty());
}

#[test]
fn parse_error_reports_message_and_status() {
    let c = CString::new("format = 1\nkind = skew\nn = 2\n\n[q]\nq12 = 2/4\n").unwrap();
    let mut handle: *mut QalgDocument = ptr::null_mut();
    let status = unsafe { qalg_document_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, QalgStatus::ParseError);
    assert!(handle.is_null());
    assert!(last_error().contains("fraction not reduced"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut handle: *mut QalgDocument = ptr::null_mut();
    assert_eq!(
        unsafe { qalg_document_parse(ptr::null(), &mut handle) },
        QalgStatus::NullArgument
    );
    let doc = parse(QWEYL3);
    assert_eq!(
        unsafe { qalg_center_json(doc, ptr::null_mut()) },
        QalgStatus::NullArgument
    );
    unsafe { qalg_document_free(doc) };
}

#[test]
fn center_round_trip() {
    let doc = parse(SKEW6);
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { qalg_center_json(doc, &mut out) }, QalgStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["report"]["l_vector"][0], 135);
    assert_eq!(json["report"]["verdict"], "not-polynomial");

    let mut rendered: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { qalg_document_render(doc, &mut rendered) },
        QalgStatus::Ok
    );
    let text = take_string(rendered);
    assert!(text.starts_with("format = 1"));
    unsafe { qalg_document_free(doc) };
}

#[test]
fn verify_matches_for_q_weyl() {
    let doc = parse(QWEYL3);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { qalg_verify_json(doc, QalgFormula::Auto, &mut out) };
    assert_eq!(status, QalgStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["matched"], true);
    unsafe { qalg_document_free(doc) };
}

#[test]
fn discriminant_json_has_factors() {
    let doc = parse(CLIFFORD_CROSS);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { qalg_discriminant_json(doc, QalgMethod::Formula, true, &mut out) };
    assert_eq!(status, QalgStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert!(json["results"][0]["factors"].is_array());
    unsafe { qalg_document_free(doc) };
}

#[test]
fn closure_status_follows_certification() {
    let doc = parse(FOUR_GEN_T);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { qalg_closure_json(doc, 0, ptr::null(), &mut out) };
    assert_eq!(status, QalgStatus::ClosureUnknown);
    let _ = take_string(out);

    let subs = CString::new("t=x3^2+x4^2").unwrap();
    let mut out2: *mut c_char = ptr::null_mut();
    let status2 = unsafe { qalg_closure_json(doc, 0, subs.as_ptr(), &mut out2) };
    assert_eq!(status2, QalgStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out2)).unwrap();
    assert_eq!(json["outcome"], "certified-full");
    unsafe { qalg_document_free(doc) };
}

#[test]
fn diagonalize_and_hilbert() {
    let doc = parse(CLIFFORD_CROSS);
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { qalg_diagonalize_json(doc, &mut out) },
        QalgStatus::Ok
    );
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["stages"].as_array().unwrap().len(), 4);
    unsafe { qalg_document_free(doc) };

    let gen = parse(GENERIC3);
    let mut out2: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { qalg_hilbert_json(gen, 8, &mut out2) }, QalgStatus::Ok);
    let json2: serde_json::Value = serde_json::from_str(&take_string(out2)).unwrap();
    assert_eq!(json2["all_match"], true);
    unsafe { qalg_document_free(gen) };

    // Wrong kind: hypothesis failure with a message.
    let q = parse(QWEYL3);
    let mut out3: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { qalg_hilbert_json(q, 8, &mut out3) },
        QalgStatus::HypothesisError
    );
    assert!(last_error().contains("generic-clifford"));
    unsafe { qalg_document_free(q) };
}
