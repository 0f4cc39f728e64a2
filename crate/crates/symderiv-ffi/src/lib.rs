//! C ABI over the report-producing entry points.
//!
//! Handles are opaque; every computation returns an error code and, on
//! success or check failure, a heap-allocated JSON report that the caller
//! releases with `symderiv_string_free`.  The header lives in
//! `include/symderiv.h` and is maintained by hand alongside this file.
//!
//! Error codes: 0 all checks pass, 1 at least one check failed, 2 bad
//! parameters, 3 internal error.

use std::ffi::{c_char, c_int, c_uint, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use symderiv::cache::CacheStore;
use symderiv::cli::{
    cmd_abelianize, cmd_conjecture, cmd_decompose, cmd_dims, cmd_polygon, cmd_verify_paper,
    AlgebraSel, RunContext, Tier,
};
use symderiv::report::Report;
use symderiv::Error;

pub const SYMDERIV_OK: c_int = 0;
pub const SYMDERIV_CHECK_FAILED: c_int = 1;
pub const SYMDERIV_BAD_PARAMETER: c_int = 2;
pub const SYMDERIV_INTERNAL: c_int = 3;

/// Opaque handle carrying the cache configuration.
pub struct SymderivContext {
    cache_dir: Option<PathBuf>,
}

impl SymderivContext {
    fn run_context(&self, full_tier: bool) -> Result<RunContext, Error> {
        let cache = match &self.cache_dir {
            Some(dir) => CacheStore::at(dir.clone())?,
            None => CacheStore::disabled(),
        };
        Ok(RunContext {
            cache,
            tier: if full_tier { Tier::Full } else { Tier::Fast },
        })
    }
}

/// Create a context.  `cache_dir` may be null for a cache-less context.
///
/// # Safety
/// `cache_dir`, when non-null, must point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn symderiv_context_new(cache_dir: *const c_char) -> *mut SymderivContext {
    let dir = if cache_dir.is_null() {
        None
    } else {
        match CStr::from_ptr(cache_dir).to_str() {
            Ok(s) => Some(PathBuf::from(s)),
            Err(_) => return ptr::null_mut(),
        }
    };
    Box::into_raw(Box::new(SymderivContext { cache_dir: dir }))
}

/// Release a context created by `symderiv_context_new`.
///
/// # Safety
/// `ctx` must be a pointer returned by `symderiv_context_new`, or null.
#[no_mangle]
pub unsafe extern "C" fn symderiv_context_free(ctx: *mut SymderivContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Release a string returned through an `out_json` parameter.
///
/// # Safety
/// `s` must be a pointer produced by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn symderiv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn symderiv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn emit(report: Result<Report, Error>, out_json: *mut *mut c_char) -> c_int {
    match report {
        Ok(report) => {
            if !out_json.is_null() {
                let json = CString::new(report.to_json()).expect("reports contain no NUL");
                unsafe { *out_json = json.into_raw() };
            }
            if report.all_pass() {
                SYMDERIV_OK
            } else {
                SYMDERIV_CHECK_FAILED
            }
        }
        Err(Error::BadParameter(_)) | Err(Error::Unsupported(_)) => SYMDERIV_BAD_PARAMETER,
        Err(_) => SYMDERIV_INTERNAL,
    }
}

fn guarded<F>(ctx: *mut SymderivContext, out_json: *mut *mut c_char, f: F) -> c_int
where
    F: FnOnce(&SymderivContext) -> Result<Report, Error>,
{
    if ctx.is_null() {
        return SYMDERIV_BAD_PARAMETER;
    }
    if !out_json.is_null() {
        unsafe { *out_json = ptr::null_mut() };
    }
    let ctx = unsafe { &*ctx };
    match catch_unwind(AssertUnwindSafe(|| f(ctx))) {
        Ok(result) => emit(result, out_json),
        Err(_) => SYMDERIV_INTERNAL,
    }
}

/// Dimension table.  `symplectic` nonzero selects the genus-`param`
/// symplectic space, zero a plain space of dimension `param`.
///
/// # Safety
/// `ctx` must be a live context pointer; `out_json` may be null or must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn symderiv_dims(
    ctx: *mut SymderivContext,
    symplectic: c_int,
    param: c_uint,
    max_degree: c_uint,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        let sel = if symplectic != 0 {
            AlgebraSel::Sympl(param as u16)
        } else {
            AlgebraSel::Plain(param as u16)
        };
        cmd_dims(&ctx.run_context(false)?, sel, max_degree as usize)
    })
}

fn parse_algebra(algebra: *const c_char, param: c_uint) -> Result<AlgebraSel, Error> {
    if algebra.is_null() {
        return Err(Error::BadParameter("algebra is null".into()));
    }
    let name = unsafe { CStr::from_ptr(algebra) }
        .to_str()
        .map_err(|_| Error::BadParameter("algebra is not UTF-8".into()))?;
    match name {
        "sympl" => Ok(AlgebraSel::Sympl(param as u16)),
        "plain" => Ok(AlgebraSel::Plain(param as u16)),
        "lie" => Ok(AlgebraSel::Lie(param as u16)),
        other => Err(Error::BadParameter(format!("unknown algebra {other}"))),
    }
}

/// Weight piece of the abelianization.  `algebra` is "sympl", "plain" or
/// "lie"; `param` is the genus or plain dimension.
///
/// # Safety
/// Pointer arguments as in `symderiv_dims`; `algebra` must be a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn symderiv_abelianize(
    ctx: *mut SymderivContext,
    algebra: *const c_char,
    param: c_uint,
    weight: c_uint,
    allow_expensive: c_int,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        let sel = parse_algebra(algebra, param)?;
        cmd_abelianize(
            &ctx.run_context(false)?,
            sel,
            weight as usize,
            allow_expensive != 0,
        )
    })
}

/// The identity battery; `full_tier` nonzero adds the genus-4 run and the
/// nine-gon.
///
/// # Safety
/// Pointer arguments as in `symderiv_dims`.
#[no_mangle]
pub unsafe extern "C" fn symderiv_verify(
    ctx: *mut SymderivContext,
    full_tier: c_int,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        cmd_verify_paper(&ctx.run_context(full_tier != 0)?)
    })
}

/// Polygon contractions over the inclusive range `k_min..=k_max`.
///
/// # Safety
/// Pointer arguments as in `symderiv_dims`.
#[no_mangle]
pub unsafe extern "C" fn symderiv_polygon(
    ctx: *mut SymderivContext,
    k_min: c_uint,
    k_max: c_uint,
    symmetric: c_int,
    disconnected: c_int,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        cmd_polygon(
            &ctx.run_context(false)?,
            k_min as usize,
            k_max as usize,
            symmetric != 0,
            disconnected != 0,
        )
    })
}

/// Weight-2 abelianization of the plain algebra against the square.
///
/// # Safety
/// Pointer arguments as in `symderiv_dims`.
#[no_mangle]
pub unsafe extern "C" fn symderiv_conjecture(
    ctx: *mut SymderivContext,
    n: c_uint,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        cmd_conjecture(&ctx.run_context(false)?, n as u16)
    })
}

/// Isotypic dimension bookkeeping at the given genus.
///
/// # Safety
/// Pointer arguments as in `symderiv_dims`.
#[no_mangle]
pub unsafe extern "C" fn symderiv_decompose(
    ctx: *mut SymderivContext,
    genus: c_uint,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(ctx, out_json, |ctx| {
        cmd_decompose(&ctx.run_context(false)?, genus as u16)
    })
}
