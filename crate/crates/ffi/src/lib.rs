//! C ABI for `harmonic4`.
//!
//! Tensors are opaque `H4Tensor` handles created by `h4_tensor_new*` and
//! released with `h4_tensor_free`. Every fallible call returns an
//! `H4Status`; on failure `h4_last_error` describes the cause. Invariant
//! arrays are always ten doubles in the order J2, J3, J4, J5, J6, K6, J7,
//! J8, J9, J10.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmonic4::io::{tensor_from_strings, AnyInvariants, AnyTensor};
use harmonic4::rotations::{isotropy_check, IsotropyTolerance, ORTHOGONALITY_TOL};
use harmonic4::verify::{self, Suite, VerifyConfig};
use harmonic4::{
    invariants, j4_from_mixed, rotate, Backend, Error, Harmonic4, Invariant, Orthogonal3,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H4Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotOrthogonal = 3,
    BackendMismatch = 4,
    VerificationFailed = 5,
    Panic = 6,
}

/// Verification suite selector for `h4_verify`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H4Suite {
    Identity = 0,
    Parity = 1,
    Restriction = 2,
    Isotropy = 3,
    Witnesses = 4,
    All = 5,
}

/// Opaque tensor handle.
pub struct H4Tensor {
    inner: AnyTensor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> H4Status {
    match e {
        Error::NotOrthogonal(_) => H4Status::NotOrthogonal,
        Error::BackendMismatch(_) => H4Status::BackendMismatch,
        Error::Verification(_) => H4Status::VerificationFailed,
        _ => H4Status::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (H4Status, String)>) -> H4Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => H4Status::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            H4Status::Panic
        }
    }
}

fn lib_err(e: Error) -> (H4Status, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (H4Status, String) {
    (H4Status::NullPointer, format!("{what} is null"))
}

unsafe fn tensor_ref<'a>(t: *const H4Tensor) -> Result<&'a H4Tensor, (H4Status, String)> {
    t.as_ref().ok_or_else(|| null("tensor"))
}

fn boxed(inner: AnyTensor) -> *mut H4Tensor {
    Box::into_raw(Box::new(H4Tensor { inner }))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn h4_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn h4_status_message(status: H4Status) -> *const c_char {
    let s: &'static CStr = match status {
        H4Status::Ok => c"ok",
        H4Status::NullPointer => c"null pointer argument",
        H4Status::InvalidArgument => c"invalid argument",
        H4Status::NotOrthogonal => c"matrix is not orthogonal",
        H4Status::BackendMismatch => c"backend mismatch",
        H4Status::VerificationFailed => c"verification failed",
        H4Status::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Float tensor from `n` (= 9) independent components.
///
/// # Safety
/// `components` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h4_tensor_new(
    components: *const f64,
    n: usize,
    out: *mut *mut H4Tensor,
) -> H4Status {
    guard(|| {
        if components.is_null() {
            return Err(null("components"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let values = std::slice::from_raw_parts(components, n);
        if values.iter().any(|x| !x.is_finite()) {
            return Err((
                H4Status::InvalidArgument,
                "components must be finite".into(),
            ));
        }
        let d = Harmonic4::from_slice(values).map_err(lib_err)?;
        *out = boxed(AnyTensor::Float(d));
        Ok(())
    })
}

/// Exact tensor from `n` (= 9) rational strings such as `"-3/4"`.
///
/// # Safety
/// `components` must point to `n` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h4_tensor_new_exact(
    components: *const *const c_char,
    n: usize,
    out: *mut *mut H4Tensor,
) -> H4Status {
    guard(|| {
        if components.is_null() {
            return Err(null("components"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let mut items = Vec::with_capacity(n);
        for &p in std::slice::from_raw_parts(components, n) {
            if p.is_null() {
                return Err(null("component string"));
            }
            let s = CStr::from_ptr(p).to_str().map_err(|_| {
                (
                    H4Status::InvalidArgument,
                    "component is not UTF-8".to_string(),
                )
            })?;
            items.push(s.to_string());
        }
        let t = tensor_from_strings(&items, Backend::Exact).map_err(lib_err)?;
        *out = boxed(t);
        Ok(())
    })
}

/// Releases a tensor. Null is ignored.
///
/// # Safety
/// `tensor` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn h4_tensor_free(tensor: *mut H4Tensor) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// 1 for exact tensors, 0 for float tensors, -1 for null.
///
/// # Safety
/// `tensor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn h4_tensor_is_exact(tensor: *const H4Tensor) -> i32 {
    match tensor.as_ref() {
        Some(t) if t.inner.backend() == Backend::Exact => 1,
        Some(_) => 0,
        None => -1,
    }
}

/// Writes the nine independent components (as doubles) to `out`.
///
/// # Safety
/// `tensor` must be a live handle; `out` must hold 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn h4_tensor_components(tensor: *const H4Tensor, out: *mut f64) -> H4Status {
    guard(|| {
        let t = tensor_ref(tensor)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = t.inner.to_f64();
        std::slice::from_raw_parts_mut(out, 9).copy_from_slice(d.independent());
        Ok(())
    })
}

/// Writes the ten invariants to `out`. Exact tensors are evaluated exactly
/// and rounded once.
///
/// # Safety
/// `tensor` must be a live handle; `out` must hold 10 doubles.
#[no_mangle]
pub unsafe extern "C" fn h4_invariants(tensor: *const H4Tensor, out: *mut f64) -> H4Status {
    guard(|| {
        let t = tensor_ref(tensor)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = match &t.inner {
            AnyTensor::Exact(d) => invariants(d).to_f64(),
            AnyTensor::Float(d) => invariants(d),
        };
        let out = std::slice::from_raw_parts_mut(out, 10);
        for f in Invariant::ALL {
            out[f.index()] = *v.get(f);
        }
        Ok(())
    })
}

/// Invariants as a JSON object (exact tensors give `"p/q"` strings).
/// Free the result with `h4_string_free`.
///
/// # Safety
/// `tensor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h4_invariants_json(
    tensor: *const H4Tensor,
    out: *mut *mut c_char,
) -> H4Status {
    guard(|| {
        let t = tensor_ref(tensor)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = AnyInvariants::of(&t.inner).to_json().to_string();
        *out = CString::new(s).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn h4_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Applies the row-major orthogonal matrix `q` (9 doubles). Exact tensors
/// are rotated in float mode.
///
/// # Safety
/// `tensor` must be a live handle; `q` must hold 9 doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn h4_rotate(
    tensor: *const H4Tensor,
    q: *const f64,
    out: *mut *mut H4Tensor,
) -> H4Status {
    guard(|| {
        let t = tensor_ref(tensor)?;
        if q.is_null() {
            return Err(null("q"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let m = Orthogonal3::from_row_major(std::slice::from_raw_parts(q, 9), ORTHOGONALITY_TOL)
            .map_err(lib_err)?;
        *out = boxed(AnyTensor::Float(rotate(&t.inner.to_f64(), &m)));
        Ok(())
    })
}

/// Monte-Carlo isotropy check with the default per-degree tolerances.
/// Writes ten maximum relative deviations to `deviations` and 1/0 to `pass`.
///
/// # Safety
/// `tensor` must be a live handle; `deviations` must hold 10 doubles; `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn h4_isotropy(
    tensor: *const H4Tensor,
    trials: usize,
    seed: u64,
    deviations: *mut f64,
    pass: *mut i32,
) -> H4Status {
    guard(|| {
        let t = tensor_ref(tensor)?;
        if deviations.is_null() || pass.is_null() {
            return Err(null("output"));
        }
        let r = isotropy_check(
            &t.inner.to_f64(),
            trials,
            seed,
            IsotropyTolerance::default(),
        )
        .map_err(lib_err)?;
        let out = std::slice::from_raw_parts_mut(deviations, 10);
        for f in Invariant::ALL {
            out[f.index()] = r.deviation(f);
        }
        *pass = r.pass as i32;
        Ok(())
    })
}

/// `J4` from `J2, J3, J6, K6`; 0 when `j2` is 0.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h4_j4_from_mixed(
    j2: f64,
    j3: f64,
    j6: f64,
    k6: f64,
    out: *mut f64,
) -> H4Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = j4_from_mixed(&j2, &j3, &j6, &k6);
        Ok(())
    })
}

/// Runs a verification suite. Returns `VerificationFailed` if any check
/// fails; `h4_last_error` then names the first failing check.
#[no_mangle]
pub extern "C" fn h4_verify(suite: H4Suite, seed: u64, trials: usize) -> H4Status {
    guard(|| {
        if trials == 0 {
            return Err((
                H4Status::InvalidArgument,
                "trials must be at least 1".into(),
            ));
        }
        let suite = match suite {
            H4Suite::Identity => Suite::Identity,
            H4Suite::Parity => Suite::Parity,
            H4Suite::Restriction => Suite::Restriction,
            H4Suite::Isotropy => Suite::Isotropy,
            H4Suite::Witnesses => Suite::Witnesses,
            H4Suite::All => Suite::All,
        };
        let cfg = VerifyConfig {
            seed,
            trials,
            ..VerifyConfig::default()
        };
        let summary = verify::run(suite, &cfg);
        let first = summary
            .failures()
            .next()
            .map(|c| format!("{}/{}: {}", c.suite, c.name, c.detail));
        match first {
            None => Ok(()),
            Some(msg) => Err((H4Status::VerificationFailed, msg)),
        }
    })
}
