use std::ffi::{c_char, CStr, CString};
use std::ptr;

use harmonic4_ffi::*;

fn float_tensor(c: [f64; 9]) -> *mut H4Tensor {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { h4_tensor_new(c.as_ptr(), 9, &mut t) },
        H4Status::Ok
    );
    t
}

fn last_error() -> String {
    let p = h4_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn invariants_of(t: *const H4Tensor) -> [f64; 10] {
    let mut out = [0.0; 10];
    assert_eq!(unsafe { h4_invariants(t, out.as_mut_ptr()) }, H4Status::Ok);
    out
}

#[test]
fn d1_invariants() {
    let t = float_tensor([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let v = invariants_of(t);
    assert_eq!(v[0], 8.0);
    assert_eq!(v[2], 32.0);
    assert_eq!(v[5], 128.0);
    assert_eq!(unsafe { h4_tensor_is_exact(t) }, 0);
    unsafe { h4_tensor_free(t) };
}

#[test]
fn exact_tensor_and_json() {
    let strs: Vec<CString> = ["8", "0", "0", "-4", "0", "5", "5", "3", "0"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = strs.iter().map(|s| s.as_ptr()).collect();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { h4_tensor_new_exact(ptrs.as_ptr(), 9, &mut t) },
        H4Status::Ok
    );
    assert_eq!(unsafe { h4_tensor_is_exact(t) }, 1);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { h4_invariants_json(t, &mut s) }, H4Status::Ok);
    let json: serde_json::Value =
        serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    assert_eq!(json["J3"], "-6480/1");
    unsafe { h4_string_free(s) };

    assert_eq!(invariants_of(t)[1], -6480.0);
    unsafe { h4_tensor_free(t) };
}

#[test]
fn bad_exact_component_is_reported() {
    let strs: Vec<CString> = ["1/0", "0", "0", "0", "0", "0", "0", "0", "0"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = strs.iter().map(|s| s.as_ptr()).collect();
    let mut t = ptr::null_mut();
    let status = unsafe { h4_tensor_new_exact(ptrs.as_ptr(), 9, &mut t) };
    assert_ne!(status, H4Status::Ok);
    assert!(t.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn argument_errors() {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { h4_tensor_new(ptr::null(), 9, &mut t) },
        H4Status::NullPointer
    );
    let short = [1.0; 4];
    assert_eq!(
        unsafe { h4_tensor_new(short.as_ptr(), 4, &mut t) },
        H4Status::InvalidArgument
    );
    let nan = [f64::NAN; 9];
    assert_eq!(
        unsafe { h4_tensor_new(nan.as_ptr(), 9, &mut t) },
        H4Status::InvalidArgument
    );
    assert!(last_error().contains("finite"));
    let mut out = [0.0; 10];
    assert_eq!(
        unsafe { h4_invariants(ptr::null(), out.as_mut_ptr()) },
        H4Status::NullPointer
    );
    assert_eq!(unsafe { h4_tensor_is_exact(ptr::null()) }, -1);
    unsafe { h4_tensor_free(ptr::null_mut()) };
    unsafe { h4_string_free(ptr::null_mut()) };
}

#[test]
fn rotation_preserves_invariants() {
    let t = float_tensor([0.3, -1.2, 0.7, 0.1, 0.9, -0.4, 0.25, 1.1, -0.6]);
    let (c, s) = (0.6f64, 0.8f64);
    let q = [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0];
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { h4_rotate(t, q.as_ptr(), &mut r) }, H4Status::Ok);
    let (a, b) = (invariants_of(t), invariants_of(r));
    for k in 0..10 {
        assert!(
            (a[k] - b[k]).abs() <= 1e-9 * a[k].abs().max(1.0),
            "{k}: {} vs {}",
            a[k],
            b[k]
        );
    }
    let mut comps = [0.0; 9];
    assert_eq!(
        unsafe { h4_tensor_components(r, comps.as_mut_ptr()) },
        H4Status::Ok
    );
    assert!((comps[0] - 0.3).abs() > 1e-6);
    unsafe {
        h4_tensor_free(r);
        h4_tensor_free(t);
    }
}

#[test]
fn non_orthogonal_matrix() {
    let t = float_tensor([1.0; 9]);
    let q = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { h4_rotate(t, q.as_ptr(), &mut r) },
        H4Status::NotOrthogonal
    );
    assert!(r.is_null());
    unsafe { h4_tensor_free(t) };
}

#[test]
fn isotropy_passes() {
    let t = float_tensor([0.5, 0.1, -0.3, 0.2, 0.7, -0.8, 0.4, 0.05, 0.9]);
    let mut dev = [f64::NAN; 10];
    let mut pass = -1;
    assert_eq!(
        unsafe { h4_isotropy(t, 200, 7, dev.as_mut_ptr(), &mut pass) },
        H4Status::Ok
    );
    assert_eq!(pass, 1);
    assert!(dev.iter().all(|d| *d >= 0.0 && *d < 1e-9));
    unsafe { h4_tensor_free(t) };
}

#[test]
fn j4_reconstruction_matches_direct() {
    let t = float_tensor([0.5, 0.1, -0.3, 0.2, 0.7, -0.8, 0.4, 0.05, 0.9]);
    let v = invariants_of(t);
    let mut j4 = 0.0;
    assert_eq!(
        unsafe { h4_j4_from_mixed(v[0], v[1], v[4], v[5], &mut j4) },
        H4Status::Ok
    );
    assert!((j4 - v[2]).abs() <= 1e-10 * v[2].abs());
    unsafe { h4_j4_from_mixed(0.0, 1.0, 1.0, 1.0, &mut j4) };
    assert_eq!(j4, 0.0);
    unsafe { h4_tensor_free(t) };
}

#[test]
fn verify_suites() {
    assert_eq!(h4_verify(H4Suite::Identity, 42, 100), H4Status::Ok);
    assert_eq!(h4_verify(H4Suite::Witnesses, 42, 100), H4Status::Ok);
    assert_eq!(h4_verify(H4Suite::Parity, 42, 0), H4Status::InvalidArgument);
}

#[test]
fn status_messages_are_static() {
    for s in [H4Status::Ok, H4Status::NotOrthogonal, H4Status::Panic] {
        let m = unsafe { CStr::from_ptr(h4_status_message(s)) };
        assert!(!m.to_bytes().is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/harmonic4.h");
    for name in [
        "h4_tensor_new",
        "h4_tensor_new_exact",
        "h4_tensor_free",
        "h4_tensor_is_exact",
        "h4_tensor_components",
        "h4_invariants",
        "h4_invariants_json",
        "h4_string_free",
        "h4_rotate",
        "h4_isotropy",
        "h4_j4_from_mixed",
        "h4_verify",
        "h4_status_message",
        "h4_last_error",
        "typedef struct H4Tensor H4Tensor",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
