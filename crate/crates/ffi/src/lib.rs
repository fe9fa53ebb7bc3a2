//! C ABI over `ogs-core`.
//!
//! Instances live behind opaque handles created from JSON and released with
//! the matching `*_free`. Every call returns an [`OgsStatus`]; on failure the
//! message is available from [`ogs_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ogs_core::cover::{run_gen_sched_auto, run_osc, CoverConfig};
use ogs_core::instance::{Instance, SetCoverInstance};
use ogs_core::norm::NormSpec;
use ogs_core::oracle::{opt_gen_sched, opt_osc, opt_sched_pack, OracleLimit};
use ogs_core::rng::Seed;
use ogs_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OgsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSpec = 3,
    OracleLimit = 4,
    Infeasible = 5,
    Internal = 6,
}

/// Scheduling instance handle.
pub struct OgsInstance(Instance);

/// Set-cover instance handle.
pub struct OgsSetCover(SetCoverInstance);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OgsStatus {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => OgsStatus::InvalidArgument,
        Error::InvalidSpec(_) | Error::Json(_) | Error::NoSolver(_) => OgsStatus::InvalidSpec,
        Error::OracleLimit { .. } => OgsStatus::OracleLimit,
        Error::Infeasible(_) => OgsStatus::Infeasible,
        _ => OgsStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), OgsStatus>) -> OgsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OgsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside ogs".into());
            OgsStatus::Internal
        }
    }
}

fn fail(e: Error) -> OgsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> OgsStatus {
    set_error(format!("null pointer: {what}"));
    OgsStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, OgsStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        OgsStatus::InvalidArgument
    })
}

fn limit_of(limit: u64) -> OracleLimit {
    if limit == 0 {
        OracleLimit::default()
    } else {
        OracleLimit(limit)
    }
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ogs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ogs_instance_from_json(json: *const c_char, out: *mut *mut OgsInstance) -> OgsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = read_str(json, "json")?;
        let inst = Instance::from_json(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(OgsInstance(inst)));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from [`ogs_instance_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ogs_instance_free(inst: *mut OgsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ogs_instance_num_jobs(inst: *const OgsInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ogs_set_cover_from_json(json: *const c_char, out: *mut *mut OgsSetCover) -> OgsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = read_str(json, "json")?;
        let sc = SetCoverInstance::from_json(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(OgsSetCover(sc)));
        Ok(())
    })
}

/// # Safety
/// `sc` must come from [`ogs_set_cover_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ogs_set_cover_free(sc: *mut OgsSetCover) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Evaluates the norm described by `norm_json` at `x[0..len]`.
///
/// # Safety
/// `norm_json` must be NUL-terminated, `x` must point to `len` doubles and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_norm_eval(norm_json: *const c_char, x: *const f64, len: usize, out: *mut f64) -> OgsStatus {
    guard(|| {
        if out.is_null() || (x.is_null() && len > 0) {
            return Err(null("x/out"));
        }
        let s = read_str(norm_json, "norm_json")?;
        let norm: NormSpec = serde_json::from_str(s).map_err(|e| fail(e.into()))?;
        norm.validate().map_err(fail)?;
        let xs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(x, len) };
        *out = norm.eval(xs).map_err(fail)?;
        Ok(())
    })
}

/// Largest number of jobs that fit within the instance budget.
/// A `limit` of zero selects the default enumeration limit.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_opt_sched_pack(inst: *const OgsInstance, limit: u64, out: *mut usize) -> OgsStatus {
    guard(|| {
        let (Some(i), false) = (inst.as_ref(), out.is_null()) else { return Err(null("inst/out")) };
        *out = opt_sched_pack(&i.0, limit_of(limit)).map_err(fail)?.count;
        Ok(())
    })
}

/// Cheapest cost of scheduling every job.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_opt_gen_sched(inst: *const OgsInstance, limit: u64, out: *mut f64) -> OgsStatus {
    guard(|| {
        let (Some(i), false) = (inst.as_ref(), out.is_null()) else { return Err(null("inst/out")) };
        *out = opt_gen_sched(&i.0, limit_of(limit)).map_err(fail)?.cost;
        Ok(())
    })
}

/// Online run placing every job. Writes the cost and the agents used.
///
/// # Safety
/// `inst` must be a live handle; `cost` and `tau` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_run_gen_sched(
    inst: *const OgsInstance,
    seed: u64,
    limit: u64,
    cost: *mut f64,
    tau: *mut usize,
) -> OgsStatus {
    guard(|| {
        let Some(i) = inst.as_ref() else { return Err(null("inst")) };
        if cost.is_null() || tau.is_null() {
            return Err(null("cost/tau"));
        }
        let cfg = CoverConfig { limit: limit_of(limit), ..CoverConfig::default() };
        let run = run_gen_sched_auto(&i.0, &cfg, Seed(seed)).map_err(fail)?;
        *cost = run.cost;
        *tau = run.tau;
        Ok(())
    })
}

/// Online set cover. Writes the cover cost and the number of sets bought.
///
/// # Safety
/// `sc` must be a live handle; `cost` and `sets` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_run_osc(
    sc: *const OgsSetCover,
    seed: u64,
    limit: u64,
    cost: *mut f64,
    sets: *mut usize,
) -> OgsStatus {
    guard(|| {
        let Some(s) = sc.as_ref() else { return Err(null("sc")) };
        if cost.is_null() || sets.is_null() {
            return Err(null("cost/sets"));
        }
        let cfg = CoverConfig { limit: limit_of(limit), ..CoverConfig::default() };
        let r = run_osc(&s.0, &cfg, Seed(seed)).map_err(fail)?;
        *cost = r.cost;
        *sets = r.chosen.len();
        Ok(())
    })
}

/// Cheapest cover cost.
///
/// # Safety
/// `sc` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ogs_opt_osc(sc: *const OgsSetCover, limit: u64, out: *mut f64) -> OgsStatus {
    guard(|| {
        let (Some(s), false) = (sc.as_ref(), out.is_null()) else { return Err(null("sc/out")) };
        *out = opt_osc(&s.0, limit_of(limit)).map_err(fail)?;
        Ok(())
    })
}
