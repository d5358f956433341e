//! C ABI over the spheremap library. Maps live behind an opaque handle;
//! every other result crosses the boundary as a JSON string owned by the
//! caller and released with `sm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spheremap::cli::NotAFoldDoc;
use spheremap::exactcore::{parse_rational, AnyMap};
use spheremap::factory::{homogeneous_map, poly_k_fold, rational_k_fold, FactoryTrace};
use spheremap::foldanalysis::{fold_profile, newton_expand_poly, newton_expand_rational};
use spheremap::json::{
    map_from_json, map_to_json, parse_complex_list, parse_fold_list, parse_rational_list, to_json, CertificateDoc,
    HermDoc, NewtonDoc, NormalFormDoc, ProfileDoc, TraceDoc,
};
use spheremap::normalform::decompose_infty_fold;
use spheremap::verify::{check_outside, check_sphere_map, SampleConfig};
use spheremap::Error;

/// Status of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// The claimed fold list fails; the output holds the witness.
    NotAFold = 5,
    /// The map is not ∞-fold; the output holds its fold profile.
    NotInftyFold = 6,
    SlackTooLarge = 7,
    Internal = 8,
    Panic = 9,
}

/// Opaque map handle.
pub struct SmMap {
    inner: AnyMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure {
    status: SmStatus,
    message: String,
}

impl Failure {
    fn new(status: SmStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => SmStatus::Parse,
            Error::NotAFold { .. } => SmStatus::NotAFold,
            Error::NotInftyFold => SmStatus::NotInftyFold,
            Error::SlackTooLarge(_) => SmStatus::SlackTooLarge,
            Error::Internal(_) | Error::GramMismatch(_) | Error::ValidationFailed(_) | Error::RowsNotOrthonormal { .. } => {
                SmStatus::Internal
            }
            _ => SmStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SmStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(_) => {
            set_last_error("panic inside spheremap");
            SmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::new(SmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(SmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn map_arg<'a>(p: *const SmMap) -> FfiResult<&'a AnyMap> {
    p.as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| Failure::new(SmStatus::NullPointer, "map is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::new(SmStatus::NullPointer, "output pointer is null"));
    }
    *out = CString::new(s).expect("JSON has no nul").into_raw();
    Ok(())
}

unsafe fn put_map(out: *mut *mut SmMap, inner: AnyMap) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::new(SmStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(SmMap { inner }));
    Ok(())
}

unsafe fn put_trace(out: *mut *mut c_char, trace: &FactoryTrace) -> FfiResult<()> {
    if out.is_null() {
        Ok(())
    } else {
        put_string(out, to_json(&TraceDoc::from(trace)))
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `map` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_map_free(map: *mut SmMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_map_from_json(json: *const c_char, out: *mut *mut SmMap) -> SmStatus {
    guard(|| {
        let m = map_from_json(str_arg(json, "json")?)?;
        put_map(out, m)
    })
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_map_to_json(map: *const SmMap, out: *mut *mut c_char) -> SmStatus {
    guard(|| put_string(out, map_to_json(map_arg(map)?)))
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_map_source_dim(map: *const SmMap, out: *mut usize) -> SmStatus {
    guard(|| {
        let n = map_arg(map)?.n();
        if out.is_null() {
            return Err(Failure::new(SmStatus::NullPointer, "output pointer is null"));
        }
        *out = n;
        Ok(())
    })
}

/// Map with squared norm scale_sq·‖z‖^{2d}.
///
/// # Safety
/// `scale_sq` must be a nul-terminated rational string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_homogeneous_map(n: usize, d: u32, scale_sq: *const c_char, out: *mut *mut SmMap) -> SmStatus {
    guard(|| {
        let scale = parse_rational(str_arg(scale_sq, "scale_sq")?)?;
        put_map(out, AnyMap::Weighted(homogeneous_map(n, d, &scale)?))
    })
}

/// Degree-m polynomial map with exactly the given folds. `radii_sq` is
/// comma-separated; `out_trace` may be null.
///
/// # Safety
/// String arguments must be nul-terminated; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_poly_k_fold(
    n: usize,
    k: usize,
    m: usize,
    radii_sq: *const c_char,
    out: *mut *mut SmMap,
    out_trace: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let radii = parse_rational_list(str_arg(radii_sq, "radii_sq")?)?;
        let (w, trace) = poly_k_fold(n, k, m, &radii)?;
        put_map(out, AnyMap::Weighted(w))?;
        put_trace(out_trace, &trace)
    })
}

/// Rational map with q = 1 + a·z and exactly the given folds. `a` lists
/// n entries "re" or "re:im"; `out_trace` may be null.
///
/// # Safety
/// String arguments must be nul-terminated; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_rational_k_fold(
    n: usize,
    k: usize,
    m: usize,
    radii_sq: *const c_char,
    a: *const c_char,
    out: *mut *mut SmMap,
    out_trace: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let radii = parse_rational_list(str_arg(radii_sq, "radii_sq")?)?;
        let a = parse_complex_list(str_arg(a, "a")?)?;
        let (f, trace) = rational_k_fold(n, k, m, &radii, &a)?;
        put_map(out, AnyMap::Rational(f))?;
        put_trace(out_trace, &trace)
    })
}

/// Fold profile as JSON.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_fold_profile(map: *const SmMap, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let p = fold_profile(map_arg(map)?)?;
        put_string(out, to_json(&ProfileDoc::from(&p)))
    })
}

/// Newton expansion over folds "t1:T1,t2:T2". On `SM_STATUS_NOT_A_FOLD`
/// the output holds the failing step and its witness.
///
/// # Safety
/// `map` must be a live handle, `folds` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_newton_expand(map: *const SmMap, folds: *const c_char, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let map = map_arg(map)?;
        let folds = parse_fold_list(str_arg(folds, "folds")?)?;
        let result = match map {
            AnyMap::Poly(p) => newton_expand_poly(p, &folds),
            AnyMap::Weighted(w) => newton_expand_poly(w, &folds),
            AnyMap::Rational(r) => newton_expand_rational(r, &folds),
        };
        match result {
            Ok(e) => put_string(out, to_json(&NewtonDoc::from(&e))),
            Err(Error::NotAFold { step, reason, witness }) => {
                let doc = NotAFoldDoc {
                    step,
                    reason: reason.clone(),
                    witness: HermDoc::from(witness.as_ref()),
                };
                put_string(out, to_json(&doc))?;
                Err(Failure::new(SmStatus::NotAFold, format!("claimed fold {step} is not a fold: {reason}")))
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Normal form as JSON. On `SM_STATUS_NOT_INFTY_FOLD` the output holds the
/// fold profile.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_decompose(map: *const SmMap, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let map = map_arg(map)?;
        let result = match map {
            AnyMap::Poly(p) => decompose_infty_fold(p),
            AnyMap::Weighted(w) => decompose_infty_fold(w),
            AnyMap::Rational(_) => Err(Error::NotInftyFold),
        };
        match result {
            Ok(nf) => put_string(out, to_json(&NormalFormDoc::new(map.n(), &nf))),
            Err(Error::NotInftyFold) => {
                put_string(out, to_json(&ProfileDoc::from(&fold_profile(map)?)))?;
                Err(Error::NotInftyFold.into())
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Exact certificate that ‖z‖² = t implies ‖f(z)‖² = T, as JSON.
///
/// # Safety
/// `map` must be a live handle, `t` and `big_t` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_check_sphere(
    map: *const SmMap,
    t: *const c_char,
    big_t: *const c_char,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let f = map_arg(map)?.to_rational();
        let t = parse_rational(str_arg(t, "t")?)?;
        let big_t = parse_rational(str_arg(big_t, "T")?)?;
        let c = check_sphere_map(&f, &t, &big_t)?;
        put_string(out, to_json(&CertificateDoc::from(&c)))
    })
}

/// Seeded sampling of ‖f(z)‖ > 1 for 1 < ‖z‖ < 3, as JSON.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_check_outside(map: *const SmMap, samples: usize, seed: u64, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let f = map_arg(map)?.to_rational();
        let cfg = SampleConfig {
            count: samples,
            seed,
            ..SampleConfig::default()
        };
        let r = check_outside(&f, &cfg)?;
        put_string(out, to_json(&r))
    })
}
