//! C ABI for pinsep. Documents are opaque handles; results come back as JSON
//! reports in strings owned by the library. Status codes match the CLI exit
//! codes where they overlap.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pinsep::algebra::DEFAULT_MAX_DIM;
use pinsep::cli::corpus::CORPUS;
use pinsep::cli::{run, selftest, Command, InputDocument, Leg, Options};
use pinsep::error::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinsepStatus {
    Ok = 0,
    SelftestFailed = 1,
    ParseError = 2,
    Error = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinsepCommand {
    Classify = 0,
    Tower = 1,
    Jb = 2,
    Diff = 3,
}

/// A parsed and loaded input document.
pub struct PinsepDocument {
    text: String,
    max_dim: usize,
    dim: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PinsepStatus {
    set_error(e.to_string());
    match e {
        Error::Parse { .. } => PinsepStatus::ParseError,
        _ => PinsepStatus::Error,
    }
}

fn guarded(f: impl FnOnce() -> PinsepStatus) -> PinsepStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic".into());
        PinsepStatus::Panic
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<Option<&'a str>, PinsepStatus> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        PinsepStatus::InvalidUtf8
    })
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s.replace('\0', " ")).expect("no interior nul");
    unsafe { *out = c.into_raw() };
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pinsep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pinsep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and loads `text`. `max_dim = 0` uses the default limit.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pinsep_document_parse(
    text: *const c_char,
    max_dim: usize,
    out: *mut *mut PinsepDocument,
) -> PinsepStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return PinsepStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match str_arg(text) {
            Ok(Some(t)) => t,
            Ok(None) => {
                set_error("null document text".into());
                return PinsepStatus::NullArgument;
            }
            Err(s) => return s,
        };
        let max_dim = if max_dim == 0 { DEFAULT_MAX_DIM } else { max_dim };
        let loaded = InputDocument::parse(text).and_then(|d| d.load(max_dim));
        match loaded {
            Ok(l) => {
                *out = Box::into_raw(Box::new(PinsepDocument {
                    text: text.to_string(),
                    max_dim,
                    dim: l.algebra.dim(),
                }));
                PinsepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a document; null is ignored.
///
/// # Safety
/// `doc` must come from `pinsep_document_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pinsep_document_free(doc: *mut PinsepDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// `dim_k C` of the document's algebra.
///
/// # Safety
/// `doc` must be a live document and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pinsep_document_dim(doc: *const PinsepDocument, out: *mut usize) -> PinsepStatus {
    if doc.is_null() || out.is_null() {
        set_error("null argument".into());
        return PinsepStatus::NullArgument;
    }
    *out = (*doc).dim;
    PinsepStatus::Ok
}

/// Runs a command and returns its JSON report. `leg` may be null (`A:C`);
/// `order < 0` uses the document's or the default order.
///
/// # Safety
/// `doc` must be a live document, `leg` null or a nul-terminated string and
/// `json_out` a valid pointer. The returned string is released with
/// `pinsep_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pinsep_run(
    doc: *const PinsepDocument,
    command: PinsepCommand,
    leg: *const c_char,
    order: i64,
    json_out: *mut *mut c_char,
) -> PinsepStatus {
    guarded(|| {
        if doc.is_null() || json_out.is_null() {
            set_error("null argument".into());
            return PinsepStatus::NullArgument;
        }
        *json_out = ptr::null_mut();
        let leg = match str_arg(leg) {
            Ok(l) => l,
            Err(s) => return s,
        };
        let leg = match leg.map(str::parse::<Leg>).transpose() {
            Ok(l) => l,
            Err(m) => {
                set_error(m);
                return PinsepStatus::Error;
            }
        };
        let doc = &*doc;
        let opts = Options {
            leg,
            order: usize::try_from(order).ok(),
            max_dim: doc.max_dim,
            ..Options::default()
        };
        let cmd = match command {
            PinsepCommand::Classify => Command::Classify,
            PinsepCommand::Tower => Command::Tower,
            PinsepCommand::Jb => Command::Jb,
            PinsepCommand::Diff => Command::Diff,
        };
        match run(cmd, &doc.text, &opts) {
            Ok(r) => {
                give_string(r.to_json(), json_out);
                PinsepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Runs the property suite on the bundled corpus; `filter` may be null.
/// Returns `SelftestFailed` with the report filled in when a property fails.
///
/// # Safety
/// `filter` must be null or a nul-terminated string and `json_out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn pinsep_selftest(filter: *const c_char, json_out: *mut *mut c_char) -> PinsepStatus {
    guarded(|| {
        if json_out.is_null() {
            set_error("null output pointer".into());
            return PinsepStatus::NullArgument;
        }
        *json_out = ptr::null_mut();
        let filter = match str_arg(filter) {
            Ok(f) => f,
            Err(s) => return s,
        };
        match selftest(CORPUS, filter, DEFAULT_MAX_DIM) {
            Ok(r) => {
                let failed = r.failed;
                let digest: String = CORPUS.iter().map(|(n, t)| format!("{n}\n{t}")).collect();
                let report = pinsep::cli::Report::new("selftest", digest.as_bytes(), pinsep::cli::Payload::Selftest(r));
                give_string(report.to_json(), json_out);
                if failed == 0 {
                    PinsepStatus::Ok
                } else {
                    PinsepStatus::SelftestFailed
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pinsep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
