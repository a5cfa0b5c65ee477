use std::ffi::{c_char, CStr, CString};
use std::ptr;

use finfree_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { finfree_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(finfree_last_error()) }.to_str().unwrap().to_owned()
}

fn from_roots(roots: &[&str]) -> *mut FinfreePoly {
    let owned: Vec<CString> = roots.iter().map(|r| CString::new(*r).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut p = ptr::null_mut();
    let st = unsafe { finfree_poly_from_roots(ptrs.as_ptr(), ptrs.len(), &mut p) };
    assert_eq!(st, FinfreeStatus::Ok);
    p
}

#[test]
fn boxplus_of_root_lists() {
    // (x-1)(x-2) boxplus_2 (x^2 - 1): a_1 = 3, a_2 = 2 + (-1) + (1/2)(3)(0) = 1.
    let p = from_roots(&["1", "2"]);
    let q = from_roots(&["1", "-1"]);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { finfree_boxplus(p, q, &mut r) }, FinfreeStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_to_json(r, &mut s) }, FinfreeStatus::Ok);
    assert_eq!(take(s), r#"{"d":2,"a":["1","3","1"]}"#);
    assert_eq!(unsafe { finfree_poly_degree(r) }, 2);
    unsafe {
        finfree_poly_free(p);
        finfree_poly_free(q);
        finfree_poly_free(r);
    }
}

#[test]
fn boxtimes_identity_and_cumulants() {
    let p = from_roots(&["1/2", "3", "-2"]);
    let one = from_roots(&["1", "1", "1"]);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { finfree_boxtimes(p, one, &mut r) }, FinfreeStatus::Ok);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        finfree_poly_to_json(p, &mut a);
        finfree_poly_to_json(r, &mut b);
    }
    assert_eq!(take(a), take(b));
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_cumulants(one, &mut k) }, FinfreeStatus::Ok);
    assert_eq!(take(k), r#"["1","0","0"]"#);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_moments(p, 2, &mut m) }, FinfreeStatus::Ok);
    // (1/2 + 3 - 2)/3 = 1/2, (1/4 + 9 + 4)/3 = 53/12
    assert_eq!(take(m), r#"["1/2","53/12"]"#);
    unsafe {
        finfree_poly_free(p);
        finfree_poly_free(one);
        finfree_poly_free(r);
    }
}

#[test]
fn family_and_expand() {
    let sel = CString::new("laguerre:1/3").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_family(sel.as_ptr(), 4, &mut p) }, FinfreeStatus::Ok);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_coeff(p, 4, &mut c) }, FinfreeStatus::Ok);
    assert_eq!(take(c), "5/2592");
    assert_eq!(unsafe { finfree_poly_coeff(p, 5, &mut c) }, FinfreeStatus::Dimension);
    unsafe { finfree_poly_free(p) };
    let h = CString::new("hermite").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { finfree_expand(h.as_ptr(), 6, &mut s) }, FinfreeStatus::Ok);
    assert_eq!(take(s), "5 - 22/d + 32/d^2 - 15/d^3");
}

#[test]
fn errors_are_reported() {
    let bad = CString::new(r#"{"a": ["2", "1"]}"#).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { finfree_poly_from_json(bad.as_ptr(), &mut p) }, FinfreeStatus::Domain);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    let junk = CString::new(r#"{"roots": ["1/0"]}"#).unwrap();
    assert_eq!(unsafe { finfree_poly_from_json(junk.as_ptr(), &mut p) }, FinfreeStatus::Parse);
    assert_eq!(unsafe { finfree_poly_from_json(ptr::null(), &mut p) }, FinfreeStatus::NullPointer);
    let a = from_roots(&["1"]);
    let b = from_roots(&["1", "2"]);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { finfree_boxplus(a, b, &mut r) }, FinfreeStatus::Dimension);
    assert_eq!(unsafe { finfree_boxplus(a, ptr::null(), &mut r) }, FinfreeStatus::NullPointer);
    let big = CString::new("hermite").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { finfree_expand(big.as_ptr(), 30, &mut s) }, FinfreeStatus::SizeLimit);
    assert!(last_error().contains("cap"));
    unsafe {
        finfree_poly_free(a);
        finfree_poly_free(b);
        finfree_poly_free(ptr::null_mut());
        finfree_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(finfree_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
