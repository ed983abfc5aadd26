use std::ffi::{c_char, CStr, CString};
use std::ptr;

use nambu_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = nambu_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

fn algebra(name: &str, z: Option<&str>, q: Option<&str>) -> *mut NambuAlgebra {
    let (name, z, q) = (c(name), z.map(c), q.map(c));
    let ptr_of = |s: &Option<CString>| s.as_ref().map_or(ptr::null(), |s| s.as_ptr());
    let mut out = ptr::null_mut();
    let status = unsafe { nambu_algebra_new(name.as_ptr(), ptr_of(&z), ptr_of(&q), &mut out) };
    assert_eq!(status, NambuStatus::Ok, "{:?}", last_error());
    out
}

/// Takes ownership of `report` and returns its JSON.
fn consume(report: *mut NambuReport) -> Value {
    assert!(!report.is_null());
    let json = unsafe { CStr::from_ptr(nambu_report_json(report)) }
        .to_str()
        .unwrap()
        .to_owned();
    unsafe { nambu_report_free(report) };
    serde_json::from_str(&json).unwrap()
}

#[test]
fn verify_symbolic_and_window() {
    let a = algebra("cfz", Some("2i"), None);
    let mut report = ptr::null_mut();
    let status = unsafe { nambu_verify(a, ptr::null(), ptr::null(), &mut report) };
    assert_eq!(status, NambuStatus::Ok);
    assert!(unsafe { nambu_report_clean(report) });
    assert!(last_error().is_none());
    let v = consume(report);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["clean"], true);
    unsafe { nambu_algebra_free(a) };

    let a = algebra("cfz", Some("1"), None);
    let window = NambuWindow { lo: -1, hi: 1 };
    let status = unsafe { nambu_verify(a, ptr::null(), &window, &mut report) };
    assert_eq!(status, NambuStatus::Violations);
    let v = consume(report);
    assert!(!v["report"]["violations"].as_array().unwrap().is_empty());
    unsafe { nambu_algebra_free(a) };
}

#[test]
fn classify_matches_the_binary() {
    let a = algebra("qvw", None, None);
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { nambu_classify(a, ptr::null(), &mut report) },
        NambuStatus::Ok
    );
    assert_eq!(
        consume(report)["report"]["nontrivial"],
        serde_json::json!(["beta"])
    );
    unsafe { nambu_algebra_free(a) };
}

#[test]
fn untwist_reports_success_and_obstruction() {
    let a = algebra("qvw", Some("2i"), None);
    let (scaling, beta, one) = (c("scaling"), c("beta"), c("1"));
    let mut t = ptr::null_mut();
    let mut report = ptr::null_mut();

    // free parameters make the two slot maps differ
    assert_eq!(
        unsafe { nambu_twist_new(a, scaling.as_ptr(), ptr::null(), ptr::null(), &mut t) },
        NambuStatus::Ok
    );
    assert_eq!(
        unsafe { nambu_untwist(a, t, &mut report) },
        NambuStatus::Precondition
    );
    unsafe { nambu_twist_free(t) };

    assert_eq!(
        unsafe { nambu_twist_new(a, scaling.as_ptr(), one.as_ptr(), one.as_ptr(), &mut t) },
        NambuStatus::Ok
    );
    assert_eq!(unsafe { nambu_untwist(a, t, &mut report) }, NambuStatus::Ok);
    assert_eq!(consume(report)["report"]["equals_cfz"], true);
    unsafe { nambu_twist_free(t) };

    assert_eq!(
        unsafe { nambu_twist_new(a, beta.as_ptr(), one.as_ptr(), one.as_ptr(), &mut t) },
        NambuStatus::Ok
    );
    assert_eq!(
        unsafe { nambu_untwist(a, t, &mut report) },
        NambuStatus::Violations
    );
    assert_eq!(consume(report)["report"]["nilpotent_order"], 2);
    unsafe {
        nambu_twist_free(t);
        nambu_algebra_free(a);
    }
}

#[test]
fn realize_and_jacobian_run() {
    let lambda = c("1/4");
    let mut report = ptr::null_mut();
    let window = NambuWindow { lo: -2, hi: 2 };
    assert_eq!(
        unsafe { nambu_realize(lambda.as_ptr(), window, 1e-12, false, &mut report) },
        NambuStatus::Ok
    );
    assert_eq!(consume(report)["report"]["recovery"]["passed"], true);

    let gamma = c("identity");
    assert_eq!(
        unsafe { nambu_jacobian_demo(gamma.as_ptr(), 20, 2, 3, 7, &mut report) },
        NambuStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(nambu_report_text(report)) }
        .to_str()
        .unwrap()
        .to_owned();
    assert!(text.contains("samples: 20"), "{text}");
    unsafe { nambu_report_free(report) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut a = ptr::null_mut();
    let mut report = ptr::null_mut();
    let nope = c("nope");
    let cfz = c("cfz");
    let qvw = c("qvw");
    let zero = c("0");
    let broken = c("2+");

    let cases: [(NambuStatus, Box<dyn Fn() -> NambuStatus>); 5] = [
        (
            NambuStatus::UnknownName,
            Box::new(|| unsafe {
                nambu_algebra_new(
                    nope.as_ptr(),
                    ptr::null(),
                    ptr::null(),
                    &mut ptr::null_mut(),
                )
            }),
        ),
        (
            NambuStatus::InvalidValue,
            Box::new(|| unsafe {
                nambu_algebra_new(
                    qvw.as_ptr(),
                    ptr::null(),
                    zero.as_ptr(),
                    &mut ptr::null_mut(),
                )
            }),
        ),
        (
            NambuStatus::Parse,
            Box::new(|| unsafe {
                nambu_algebra_new(
                    cfz.as_ptr(),
                    broken.as_ptr(),
                    ptr::null(),
                    &mut ptr::null_mut(),
                )
            }),
        ),
        (
            NambuStatus::NullArgument,
            Box::new(|| unsafe {
                nambu_algebra_new(ptr::null(), ptr::null(), ptr::null(), &mut ptr::null_mut())
            }),
        ),
        (
            NambuStatus::NullArgument,
            Box::new(|| unsafe { nambu_classify(ptr::null(), ptr::null(), &mut ptr::null_mut()) }),
        ),
    ];
    for (i, (expected, call)) in cases.iter().enumerate() {
        assert_eq!(call(), *expected, "case {i}");
        assert!(last_error().is_some(), "case {i}");
    }

    // symbolic z cannot be checked on a window
    let status = unsafe { nambu_algebra_new(cfz.as_ptr(), ptr::null(), ptr::null(), &mut a) };
    assert_eq!(status, NambuStatus::Ok);
    let window = NambuWindow { lo: -1, hi: 1 };
    assert_eq!(
        unsafe { nambu_verify(a, ptr::null(), &window, &mut report) },
        NambuStatus::Precondition
    );
    assert!(report.is_null());
    let empty = NambuWindow { lo: 2, hi: 1 };
    assert_eq!(
        unsafe { nambu_classify(a, &empty, &mut report) },
        NambuStatus::InvalidValue
    );
    assert!(last_error().unwrap().contains("empty"));
    unsafe { nambu_algebra_free(a) };

    let bytes = [0xffu8, 0];
    let status = unsafe {
        nambu_algebra_new(
            bytes.as_ptr() as *const c_char,
            ptr::null(),
            ptr::null(),
            &mut a,
        )
    };
    assert_eq!(status, NambuStatus::InvalidUtf8);
    assert!(a.is_null());
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        nambu_algebra_free(ptr::null_mut());
        nambu_twist_free(ptr::null_mut());
        nambu_report_free(ptr::null_mut());
        assert!(nambu_report_json(ptr::null()).is_null());
        assert!(!nambu_report_clean(ptr::null()));
    }
    let v = unsafe { CStr::from_ptr(nambu_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
