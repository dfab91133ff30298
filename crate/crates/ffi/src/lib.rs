//! C interface. Every entry point returns a [`Gsp4hStatus`]; strings handed
//! out by the library are released with [`gsp4h_string_free`] and kernel
//! handles with [`gsp4h_kernel_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gsp4h::cli::{dispatch, Command, InputDocument, Status};
use gsp4h::hodge_kernel::{recover_parameters, summarize, KernelError, KernelSummary};
use gsp4h::linalg::Subspace;
use gsp4h::phi_module::nondegeneracy_poly;
use gsp4h::scalar::{Field, Rational};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gsp4hStatus {
    Ok = 0,
    /// Malformed or out-of-range input.
    Invalid = 2,
    /// Parameters on the degeneracy locus.
    Degenerate = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

impl From<Status> for Gsp4hStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => Gsp4hStatus::Ok,
            Status::Invalid => Gsp4hStatus::Invalid,
            Status::Degenerate => Gsp4hStatus::Degenerate,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg.into()));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Kernel of the summed tangent map at a rational point `(a, b)`.
pub struct Gsp4hKernel {
    a: Rational,
    b: Rational,
    summary: KernelSummary,
    kernel: Subspace<Rational>,
}

fn guarded(f: impl FnOnce() -> Gsp4hStatus) -> Gsp4hStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            Gsp4hStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Gsp4hStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(Gsp4hStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        Gsp4hStatus::InvalidUtf8
    })
}

fn into_c(s: String) -> *mut c_char {
    // interior NULs cannot occur in JSON or wire scalars
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn kernel_status(e: &KernelError) -> Gsp4hStatus {
    set_error(e.to_string());
    match e {
        KernelError::BadKernel(_) => Gsp4hStatus::Invalid,
        _ => Gsp4hStatus::Degenerate,
    }
}

/// Builds the kernel at `(a, b)`, given as rational strings such as `"3/2"`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_kernel_new(a: *const c_char, b: *const c_char, out: *mut *mut Gsp4hKernel) -> Gsp4hStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Gsp4hStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (a, b) = match (read_str(a), read_str(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let (a, b) = match (Rational::parse_wire(a), Rational::parse_wire(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                set_error(e.to_string());
                return Gsp4hStatus::Invalid;
            }
        };
        if nondegeneracy_poly(&a, &b).is_zero() {
            set_error("Hodge parameters are degenerate");
            return Gsp4hStatus::Degenerate;
        }
        match summarize(&a, &b) {
            Ok((summary, kernel)) => {
                *out = Box::into_raw(Box::new(Gsp4hKernel { a, b, summary, kernel }));
                Gsp4hStatus::Ok
            }
            Err(e) => kernel_status(&e),
        }
    })
}

/// # Safety
/// `k` must come from [`gsp4h_kernel_new`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_kernel_free(k: *mut Gsp4hKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Rank of the tangent map, kernel dimension and glue dimension.
///
/// # Safety
/// `k` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_kernel_dims(
    k: *const Gsp4hKernel,
    rank: *mut usize,
    kernel_dim: *mut usize,
    glue_dim: *mut usize,
) -> Gsp4hStatus {
    guarded(|| {
        if k.is_null() || rank.is_null() || kernel_dim.is_null() || glue_dim.is_null() {
            set_error("null pointer argument");
            return Gsp4hStatus::NullPointer;
        }
        let k = &*k;
        *rank = k.summary.rank;
        *kernel_dim = k.summary.kernel_dim;
        *glue_dim = k.summary.glue_dim;
        Gsp4hStatus::Ok
    })
}

/// Recovers `(a, b)` from the kernel alone. Both strings are owned by the caller.
///
/// # Safety
/// `k` must be a live handle; `out_a` and `out_b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_kernel_recover(
    k: *const Gsp4hKernel,
    out_a: *mut *mut c_char,
    out_b: *mut *mut c_char,
) -> Gsp4hStatus {
    guarded(|| {
        if k.is_null() || out_a.is_null() || out_b.is_null() {
            set_error("null pointer argument");
            return Gsp4hStatus::NullPointer;
        }
        *out_a = ptr::null_mut();
        *out_b = ptr::null_mut();
        let k = &*k;
        match recover_parameters(&k.kernel) {
            Ok(r) => {
                debug_assert!(r.a == k.a && r.b == k.b);
                *out_a = into_c(r.a.to_wire());
                *out_b = into_c(r.b.to_wire());
                Gsp4hStatus::Ok
            }
            Err(e) => kernel_status(&e),
        }
    })
}

/// Runs a command on a JSON input document and returns the JSON report.
/// The returned status mirrors the report status; the report is produced
/// for invalid and degenerate inputs too.
///
/// # Safety
/// `command` and `document` must be NUL-terminated (document may be null for
/// commands without input); `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_run(
    command: *const c_char,
    document: *const c_char,
    symbolic: bool,
    out_json: *mut *mut c_char,
) -> Gsp4hStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return Gsp4hStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let name = match read_str(command) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let Some(cmd) = Command::parse(name) else {
            set_error(format!("unknown command {name:?}"));
            return Gsp4hStatus::Invalid;
        };
        let text = if document.is_null() {
            ""
        } else {
            match read_str(document) {
                Ok(s) => s,
                Err(s) => return s,
            }
        };
        let doc = match InputDocument::from_json(text) {
            Ok(d) => d,
            Err(e) => {
                set_error(e);
                return Gsp4hStatus::Invalid;
            }
        };
        let report = dispatch(cmd, &doc, symbolic);
        if let Some(e) = &report.error {
            set_error(e.clone());
        }
        *out_json = into_c(serde_json::to_string(&report).expect("serializable"));
        report.status.into()
    })
}

/// Message for the most recent failure on this thread, or null. Owned by the caller.
#[no_mangle]
pub extern "C" fn gsp4h_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone()).map(into_c).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gsp4h_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
