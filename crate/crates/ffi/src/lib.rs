//! C ABI over `finfree`.
//!
//! Polynomials cross the boundary as opaque [`FinfreePoly`] handles. Rationals
//! and anything list-shaped cross as NUL-terminated UTF-8 strings (`"num/den"`
//! or JSON); strings returned by the library must be released with
//! [`finfree_string_free`]. Every fallible call returns a [`FinfreeStatus`];
//! the message for the most recent failure on the calling thread is available
//! from [`finfree_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use finfree::families::FamilyKind;
use finfree::ffpoly::{parse_poly_json, MonicPoly};
use finfree::identity::order_d_expansion;
use finfree::rational::{fmt_q, parse_q};
use finfree::Error;

/// Result codes. `Ok` is zero; everything else is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinfreeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    SizeLimit = 5,
    Dimension = 6,
    Truncation = 7,
    Internal = 8,
}

/// Opaque polynomial handle; release with [`finfree_poly_free`].
pub struct FinfreePoly {
    inner: MonicPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FinfreeStatus {
    match e {
        Error::SizeLimit { .. } => FinfreeStatus::SizeLimit,
        Error::Dimension { .. } => FinfreeStatus::Dimension,
        Error::Domain(_) => FinfreeStatus::Domain,
        Error::Parse(_) => FinfreeStatus::Parse,
        Error::Truncation { .. } => FinfreeStatus::Truncation,
        Error::Invariant(_) => FinfreeStatus::Internal,
    }
}

struct Fail(FinfreeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FinfreeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FinfreeStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FinfreeStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(FinfreeStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(FinfreeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn poly_ref<'a>(p: *const FinfreePoly, what: &str) -> Result<&'a MonicPoly, Fail> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Fail(FinfreeStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put_poly(out: *mut *mut FinfreePoly, p: MonicPoly) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(FinfreeStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(FinfreePoly { inner: p }));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(FinfreeStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(FinfreeStatus::Internal, "string contains NUL".into()))?
        .into_raw();
    Ok(())
}

fn json_list(items: impl Iterator<Item = String>) -> String {
    serde_json::to_string(&items.collect::<Vec<_>>()).expect("strings serialize")
}

unsafe fn read_list(items: *const *const c_char, len: usize, what: &str) -> Result<Vec<finfree::rational::Q>, Fail> {
    if items.is_null() && len > 0 {
        return Err(Fail(FinfreeStatus::NullPointer, format!("{what} is null")));
    }
    (0..len)
        .map(|i| Ok(parse_q(read_str(*items.add(i), what)?)?))
        .collect()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn finfree_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn finfree_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Monic polynomial from `a_0..a_d` (`len = d + 1`, `a_0 = 1`), each `"num/den"`.
///
/// # Safety
/// `coeffs` must point to `len` valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_from_coeffs(
    coeffs: *const *const c_char,
    len: usize,
    out: *mut *mut FinfreePoly,
) -> FinfreeStatus {
    guard(|| {
        let a = read_list(coeffs, len, "coefficient")?;
        put_poly(out, MonicPoly::new(a)?)
    })
}

/// `prod (x - r_i)` from `len` roots, each `"num/den"`.
///
/// # Safety
/// `roots` must point to `len` valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_from_roots(
    roots: *const *const c_char,
    len: usize,
    out: *mut *mut FinfreePoly,
) -> FinfreeStatus {
    guard(|| {
        let r = read_list(roots, len, "root")?;
        put_poly(out, MonicPoly::from_roots(&r)?)
    })
}

/// Polynomial from JSON, `{"a": [...]}` or `{"roots": [...]}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_from_json(json: *const c_char, out: *mut *mut FinfreePoly) -> FinfreeStatus {
    guard(|| put_poly(out, parse_poly_json(read_str(json, "json")?)?))
}

/// Family member of degree `d`; `selector` is `hermite`, `power:A` or `laguerre:L`.
///
/// # Safety
/// `selector` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_family(selector: *const c_char, d: usize, out: *mut *mut FinfreePoly) -> FinfreeStatus {
    guard(|| {
        let kind: FamilyKind = read_str(selector, "selector")?.parse()?;
        put_poly(out, kind.poly(d)?)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `p` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_free(p: *mut FinfreePoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree of `p`, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_degree(p: *const FinfreePoly) -> usize {
    p.as_ref().map_or(0, |h| h.inner.d())
}

/// `{"d": d, "a": [...]}`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_to_json(p: *const FinfreePoly, out: *mut *mut c_char) -> FinfreeStatus {
    guard(|| {
        let p = poly_ref(p, "polynomial")?;
        put_string(out, serde_json::to_string(&p.to_json()).expect("plain data"))
    })
}

/// Coefficient `a_i` as `"num/den"`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_coeff(p: *const FinfreePoly, i: usize, out: *mut *mut c_char) -> FinfreeStatus {
    guard(|| {
        let p = poly_ref(p, "polynomial")?;
        let c = p
            .a()
            .get(i)
            .ok_or_else(|| Fail(FinfreeStatus::Dimension, format!("index {i} exceeds degree {}", p.d())))?;
        put_string(out, fmt_q(c))
    })
}

/// `p boxplus_d q`.
///
/// # Safety
/// `p`, `q` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_boxplus(
    p: *const FinfreePoly,
    q: *const FinfreePoly,
    out: *mut *mut FinfreePoly,
) -> FinfreeStatus {
    guard(|| put_poly(out, poly_ref(p, "p")?.boxplus(poly_ref(q, "q")?)?))
}

/// `p boxtimes_d q`.
///
/// # Safety
/// `p`, `q` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_boxtimes(
    p: *const FinfreePoly,
    q: *const FinfreePoly,
    out: *mut *mut FinfreePoly,
) -> FinfreeStatus {
    guard(|| put_poly(out, poly_ref(p, "p")?.boxtimes(poly_ref(q, "q")?)?))
}

/// Finite free cumulants `kappa_1..kappa_d` as a JSON array of strings.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_cumulants(p: *const FinfreePoly, out: *mut *mut c_char) -> FinfreeStatus {
    guard(|| {
        let k = poly_ref(p, "polynomial")?.cumulants()?;
        put_string(out, json_list(k.values().iter().map(fmt_q)))
    })
}

/// Moments `m_1..m_n` as a JSON array of strings.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_poly_moments(p: *const FinfreePoly, n: usize, out: *mut *mut c_char) -> FinfreeStatus {
    guard(|| {
        let m = poly_ref(p, "polynomial")?.moments(n);
        put_string(out, json_list(m.values().iter().map(fmt_q)))
    })
}

/// `m_n` of a family as a polynomial in `1/d`, e.g. `"1 - 1/d"`.
///
/// # Safety
/// `selector` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finfree_expand(selector: *const c_char, n: usize, out: *mut *mut c_char) -> FinfreeStatus {
    guard(|| {
        let kind: FamilyKind = read_str(selector, "selector")?.parse()?;
        if n == 0 {
            return Err(Fail(FinfreeStatus::Domain, "order must be at least 1".into()));
        }
        let e = order_d_expansion(n, &kind.cumulant_profile(n))?;
        put_string(out, e.to_string())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn finfree_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
