use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pinsep_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { pinsep_string_free(s) };
    out
}

#[test]
fn classify_through_the_handle() {
    let text = CString::new("p = 2\n[algebra]\nx^2 = 0\ny^2 = 0\n[subring B]\nx*y\n").unwrap();
    let mut doc = ptr::null_mut();
    assert_eq!(
        unsafe { pinsep_document_parse(text.as_ptr(), 0, &mut doc) },
        PinsepStatus::Ok
    );
    let mut dim = 0;
    assert_eq!(unsafe { pinsep_document_dim(doc, &mut dim) }, PinsepStatus::Ok);
    assert_eq!(dim, 4);
    let leg = CString::new("B:C").unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { pinsep_run(doc, PinsepCommand::Classify, leg.as_ptr(), -1, &mut json) };
    assert_eq!(st, PinsepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["result"]["fiber"]["fiber_dim"], 3);
    assert_eq!(v["result"]["galois"]["verdict"], "false");
    let mut json = ptr::null_mut();
    let st = unsafe { pinsep_run(doc, PinsepCommand::Diff, ptr::null(), 1, &mut json) };
    assert_eq!(st, PinsepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["result"]["bracket_dims"], serde_json::json!([4, 12]));
    unsafe { pinsep_document_free(doc) };
}

#[test]
fn error_codes() {
    let bad = CString::new("p = 2\n[algebra]\nx^2 = +\n").unwrap();
    let mut doc = ptr::null_mut();
    assert_eq!(
        unsafe { pinsep_document_parse(bad.as_ptr(), 0, &mut doc) },
        PinsepStatus::ParseError
    );
    assert!(doc.is_null());
    let msg = unsafe { CStr::from_ptr(pinsep_last_error()) }.to_str().unwrap();
    assert!(msg.contains("line 3"), "{msg}");
    assert_eq!(
        unsafe { pinsep_document_parse(ptr::null(), 0, &mut doc) },
        PinsepStatus::NullArgument
    );
    let text = CString::new("p = 2\n[algebra]\nx^2 = 0\n").unwrap();
    assert_eq!(
        unsafe { pinsep_document_parse(text.as_ptr(), 0, &mut doc) },
        PinsepStatus::Ok
    );
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { pinsep_run(doc, PinsepCommand::Tower, ptr::null(), -1, &mut json) },
        PinsepStatus::Error
    );
    assert!(json.is_null());
    let leg = CString::new("not a leg").unwrap();
    assert_eq!(
        unsafe { pinsep_run(doc, PinsepCommand::Classify, leg.as_ptr(), -1, &mut json) },
        PinsepStatus::Error
    );
    unsafe { pinsep_document_free(doc) };
    let big = CString::new("p = 2\n[algebra]\nx^64 = 0\n").unwrap();
    assert_eq!(
        unsafe { pinsep_document_parse(big.as_ptr(), 8, &mut doc) },
        PinsepStatus::Error
    );
    unsafe { pinsep_document_free(ptr::null_mut()) };
    unsafe { pinsep_string_free(ptr::null_mut()) };
}

#[test]
fn selftest_with_filter() {
    let filter = CString::new("tower").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pinsep_selftest(filter.as_ptr(), &mut json) }, PinsepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["result"]["failed"], 0);
    let filter = CString::new("nothing").unwrap();
    assert_eq!(
        unsafe { pinsep_selftest(filter.as_ptr(), &mut json) },
        PinsepStatus::Error
    );
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(pinsep_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-"])
        .arg(format!("-I{}", include.display()))
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(b"#include \"pinsep.h\"\nint main(void) { PinsepDocument *d = 0; pinsep_document_free(d); return PINSEP_STATUS_OK; }\n")?;
            child.wait_with_output()
        })
    else {
        eprintln!("no C compiler; header check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
