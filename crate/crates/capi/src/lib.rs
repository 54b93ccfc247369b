//! C ABI over the mukit library.
//!
//! Conventions:
//! - All strings are NUL-terminated UTF-8. Strings returned by this library
//!   must be freed with [`mukit_string_free`].
//! - Certificates are opaque handles freed with [`mukit_certificate_free`].
//! - Every entry point returns a [`MukitStatus`]; on any status other than
//!   `Ok`, `Fail`, or `Unknown`, the thread-local error message is available
//!   via [`mukit_last_error_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use mukit::cert::{self, Certificate, EngineChoice, Outcome};
use mukit::initial::SubLfpEngine;
use mukit::Error;

/// Status codes mirroring the CLI exit codes, plus FFI-specific failures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MukitStatus {
    /// The check passed.
    Ok = 0,
    /// The check found a mathematical counterexample.
    Fail = 1,
    /// A cap or budget was exhausted before a verdict.
    Unknown = 2,
    /// Malformed input (schema, precondition, or validation error).
    InputError = 3,
    /// A null pointer or invalid UTF-8 was passed in.
    BadPointer = 4,
    /// A panic was caught at the boundary.
    Panic = 5,
}

/// Opaque certificate handle.
pub struct MukitCertificate {
    inner: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of_error(e: &Error) -> MukitStatus {
    if e.is_cap() {
        MukitStatus::Unknown
    } else {
        MukitStatus::InputError
    }
}

fn status_of_outcome(o: Outcome) -> MukitStatus {
    match o {
        Outcome::Pass => MukitStatus::Ok,
        Outcome::Fail => MukitStatus::Fail,
        Outcome::Unknown => MukitStatus::Unknown,
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn take_str<'a>(ptr: *const c_char) -> Result<&'a str, MukitStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(MukitStatus::BadPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        MukitStatus::BadPointer
    })
}

fn deliver(
    out_cert: *mut *mut MukitCertificate,
    result: mukit::Result<Certificate>,
) -> MukitStatus {
    match result {
        Ok(cert) => {
            let status = status_of_outcome(cert.outcome);
            if !out_cert.is_null() {
                let boxed = Box::new(MukitCertificate { inner: cert });
                unsafe { *out_cert = Box::into_raw(boxed) };
            }
            status
        }
        Err(e) => {
            set_error(&e.to_string());
            if !out_cert.is_null() {
                unsafe { *out_cert = std::ptr::null_mut() };
            }
            status_of_error(&e)
        }
    }
}

fn guarded(f: impl FnOnce() -> MukitStatus) -> MukitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic caught at the FFI boundary");
            MukitStatus::Panic
        }
    }
}

/// The last error message on this thread, or null. Free with
/// [`mukit_string_free`].
#[no_mangle]
pub extern "C" fn mukit_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mukit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `cert` must be null or a handle previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mukit_certificate_free(cert: *mut MukitCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Canonical JSON of a certificate. Free with [`mukit_string_free`].
///
/// # Safety
/// `cert` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mukit_certificate_json(cert: *const MukitCertificate) -> *mut c_char {
    if cert.is_null() {
        set_error("null certificate handle");
        return std::ptr::null_mut();
    }
    match (*cert).inner.to_canonical_string() {
        Ok(s) => CString::new(s).map(CString::into_raw).unwrap_or(std::ptr::null_mut()),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// The outcome of a certificate as a status code.
///
/// # Safety
/// `cert` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mukit_certificate_outcome(
    cert: *const MukitCertificate,
) -> MukitStatus {
    if cert.is_null() {
        set_error("null certificate handle");
        return MukitStatus::BadPointer;
    }
    status_of_outcome((*cert).inner.outcome)
}

/// Least fixed point of a monotone endomap instance (kind: poset_map).
/// `engine` is one of kleene, zermelo, tarski, pataraia, monoid, all.
///
/// # Safety
/// String arguments must be valid NUL-terminated UTF-8; `out_cert` may be
/// null when only the status is wanted.
#[no_mangle]
pub unsafe extern "C" fn mukit_fixpoint(
    engine: *const c_char,
    instance_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let engine = match take_str(engine) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let text = match take_str(instance_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let choice = match EngineChoice::parse(engine) {
            Ok(c) => c,
            Err(e) => {
                set_error(&e.to_string());
                return MukitStatus::InputError;
            }
        };
        deliver(out_cert, cert::run_fixpoint(choice, "instance", text))
    })
}

/// Unique coalgebra-to-algebra morphism for a well-founded coalgebra.
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_hylo(
    coalgebra_json: *const c_char,
    algebra_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let c = match take_str(coalgebra_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let a = match take_str(algebra_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(out_cert, cert::run_hylo("coalgebra", c, "algebra", a))
    })
}

/// Iterate the initial-algebra chain of a functor instance.
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_chain(
    budget: u32,
    functor_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(functor_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(out_cert, cert::run_chain(budget as usize, "functor", text))
    })
}

/// Initial algebra from a pre-fixed point (kind: prefixed_point).
/// `via` is pataraia or zermelo.
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_initial_algebra(
    via: *const c_char,
    prefixed_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let via = match take_str(via) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let text = match take_str(prefixed_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let engine = match via {
            "pataraia" => SubLfpEngine::Pataraia,
            "zermelo" => SubLfpEngine::Zermelo,
            other => {
                set_error(&format!("unknown engine `{other}`"));
                return MukitStatus::InputError;
            }
        };
        deliver(
            out_cert,
            cert::run_initial_algebra(engine, "prefixed_point", text),
        )
    })
}

/// Run both initial-algebra constructions and compare them.
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_cross_validate(
    budget: u32,
    prefixed_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(prefixed_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(
            out_cert,
            cert::run_cross_validate(budget as usize, "prefixed_point", text),
        )
    })
}

/// Colimit characterization for a directed diagram of embeddings.
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_verify_colimit(
    diagram_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(diagram_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(out_cert, cert::run_verify_colimit("diagram", text))
    })
}

/// Smoothness of a directed subset family (kind: subset_family).
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_check_smooth(
    family_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(family_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(out_cert, cert::run_check_smooth("subset_family", text))
    })
}

/// Directed join of finite metric subspaces (kind: metric_family).
///
/// # Safety
/// As for [`mukit_fixpoint`].
#[no_mangle]
pub unsafe extern "C" fn mukit_metric_join(
    family_json: *const c_char,
    out_cert: *mut *mut MukitCertificate,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(family_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        deliver(out_cert, cert::run_metric_join("metric_family", text))
    })
}

/// Re-verify a certificate by direct evaluation. `files_json`, when not
/// null, is a JSON array of [name, content] pairs matching the
/// certificate's inputs in order. `out_ok` receives the verdict.
///
/// # Safety
/// As for [`mukit_fixpoint`]; `out_ok` must be valid when not null.
#[no_mangle]
pub unsafe extern "C" fn mukit_recheck(
    certificate_json: *const c_char,
    files_json: *const c_char,
    out_ok: *mut bool,
) -> MukitStatus {
    guarded(|| {
        let text = match take_str(certificate_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let files: Vec<(String, String)> = if files_json.is_null() {
            Vec::new()
        } else {
            let s = match take_str(files_json) {
                Ok(s) => s,
                Err(st) => return st,
            };
            match serde_json::from_str(s) {
                Ok(v) => v,
                Err(e) => {
                    set_error(&format!("malformed files array: {e}"));
                    return MukitStatus::InputError;
                }
            }
        };
        let cert = match Certificate::parse(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(&e.to_string());
                return MukitStatus::InputError;
            }
        };
        match cert::recheck(&cert, &files) {
            Ok(report) => {
                if !out_ok.is_null() {
                    *out_ok = report.ok;
                }
                if report.ok {
                    MukitStatus::Ok
                } else {
                    set_error(&report.detail);
                    MukitStatus::Fail
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of_error(&e)
            }
        }
    })
}
