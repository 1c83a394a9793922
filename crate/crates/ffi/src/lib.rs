//! C interface. Instances and solutions are opaque handles owned by the
//! caller and released with the matching `*_free` function. Every entry
//! point returns an [`IvdStatus`]; on failure a description is available
//! from [`ivd_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ivd_core::dispatch::{solve_with, Algo, DispatchError};
use ivd_core::instance::{parse_instance, serialize_solution};
use ivd_core::voronoi::{check_solution, CheckError};
use ivd_core::{Instance, Solution};

/// Parsed instance.
pub struct IvdInstance(Instance);

/// Site list, one vertex per cell.
pub struct IvdSolution(Solution);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInstance = 4,
    /// The requested algorithm does not apply to this instance.
    NotApplicable = 5,
    BudgetExceeded = 6,
    LengthMismatch = 7,
    InvalidVertex = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvdAlgo {
    Auto = 0,
    Tree = 1,
    Sat2 = 2,
    Brute = 3,
}

impl From<IvdAlgo> for Algo {
    fn from(a: IvdAlgo) -> Self {
        match a {
            IvdAlgo::Auto => Algo::Auto,
            IvdAlgo::Tree => Algo::Tree,
            IvdAlgo::Sat2 => Algo::Sat2,
            IvdAlgo::Brute => Algo::Brute,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Fallible = Result<(), (IvdStatus, String)>;

fn guard(f: impl FnOnce() -> Fallible) -> IvdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IvdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            IvdStatus::Panic
        }
    }
}

fn null(what: &str) -> (IvdStatus, String) {
    (IvdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (IvdStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (IvdStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Parses a JSON instance.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_instance` writable.
#[no_mangle]
pub unsafe extern "C" fn ivd_instance_parse(json: *const c_char, out_instance: *mut *mut IvdInstance) -> IvdStatus {
    guard(|| {
        let slot = out(out_instance, "out_instance")?;
        *slot = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (IvdStatus::InvalidUtf8, e.to_string()))?;
        let inst = parse_instance(text).map_err(|e| (IvdStatus::ParseError, e.to_string()))?;
        *slot = Box::into_raw(Box::new(IvdInstance(inst)));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from [`ivd_instance_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ivd_instance_free(inst: *mut IvdInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ivd_instance_vertex_count(inst: *const IvdInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// Cell count, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ivd_instance_cell_count(inst: *const IvdInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.k())
}

/// Decides the instance. On `IVD_STATUS_OK`, `*found` tells whether sites
/// exist; if so `*out_solution` holds them, otherwise it is null.
/// `budget` bounds the brute-force search only.
///
/// # Safety
/// `inst` must be a live handle; `out_solution` and `found` writable.
#[no_mangle]
pub unsafe extern "C" fn ivd_solve(
    inst: *const IvdInstance,
    algo: IvdAlgo,
    budget: u64,
    out_solution: *mut *mut IvdSolution,
    found: *mut bool,
) -> IvdStatus {
    guard(|| {
        let slot = out(out_solution, "out_solution")?;
        *slot = ptr::null_mut();
        let found = out(found, "found")?;
        *found = false;
        let inst = borrow(inst, "instance")?;
        let (answer, _) = solve_with(&inst.0, algo.into(), u128::from(budget)).map_err(|e| {
            let status = match e {
                DispatchError::Invalid(_) => IvdStatus::InvalidInstance,
                DispatchError::NotATree | DispatchError::NotEligible(_) => IvdStatus::NotApplicable,
                DispatchError::Budget(_) => IvdStatus::BudgetExceeded,
                DispatchError::Internal(_) => IvdStatus::Internal,
            };
            (status, e.to_string())
        })?;
        if let Some(sol) = answer {
            *found = true;
            *slot = Box::into_raw(Box::new(IvdSolution(sol)));
        }
        Ok(())
    })
}

/// Builds a solution from `len` vertex ids.
///
/// # Safety
/// `sites` must point to `len` readable values (or be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn ivd_solution_new(
    sites: *const usize,
    len: usize,
    out_solution: *mut *mut IvdSolution,
) -> IvdStatus {
    guard(|| {
        let slot = out(out_solution, "out_solution")?;
        *slot = ptr::null_mut();
        let sites = match len {
            0 => Vec::new(),
            _ if sites.is_null() => return Err(null("sites")),
            _ => std::slice::from_raw_parts(sites, len).to_vec(),
        };
        *slot = Box::into_raw(Box::new(IvdSolution(Solution::new(sites))));
        Ok(())
    })
}

/// Number of sites, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ivd_solution_len(sol: *const IvdSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.sites.len())
}

/// Pointer to the site array, valid while the handle lives.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ivd_solution_sites(sol: *const IvdSolution) -> *const usize {
    sol.as_ref().map_or(ptr::null(), |s| s.0.sites.as_ptr())
}

/// JSON form of the solution, to be released with [`ivd_string_free`].
///
/// # Safety
/// `sol` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ivd_solution_to_json(sol: *const IvdSolution, out_json: *mut *mut c_char) -> IvdStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let sol = borrow(sol, "solution")?;
        let s = CString::new(serialize_solution(&sol.0)).map_err(|e| (IvdStatus::Internal, e.to_string()))?;
        *slot = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `sol` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ivd_solution_free(sol: *mut IvdSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ivd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks whether `sol` induces exactly the instance's cells.
///
/// # Safety
/// `inst` and `sol` must be live handles and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn ivd_check(inst: *const IvdInstance, sol: *const IvdSolution, valid: *mut bool) -> IvdStatus {
    guard(|| {
        let valid = out(valid, "valid")?;
        *valid = false;
        let inst = borrow(inst, "instance")?;
        let sol = borrow(sol, "solution")?;
        *valid = check_solution(&inst.0, &sol.0).map_err(|e| {
            let status = match e {
                CheckError::LengthMismatch { .. } => IvdStatus::LengthMismatch,
                CheckError::InvalidVertex(_) => IvdStatus::InvalidVertex,
            };
            (status, e.to_string())
        })?;
        Ok(())
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ivd_status_message(status: IvdStatus) -> *const c_char {
    let s: &'static CStr = match status {
        IvdStatus::Ok => c"ok",
        IvdStatus::NullPointer => c"null pointer argument",
        IvdStatus::InvalidUtf8 => c"input is not UTF-8",
        IvdStatus::ParseError => c"malformed instance",
        IvdStatus::InvalidInstance => c"instance violates its structural rules",
        IvdStatus::NotApplicable => c"algorithm does not apply to this instance",
        IvdStatus::BudgetExceeded => c"search budget exceeded",
        IvdStatus::LengthMismatch => c"site count differs from cell count",
        IvdStatus::InvalidVertex => c"site is not a vertex",
        IvdStatus::Internal => c"internal error",
        IvdStatus::Panic => c"panic inside the library",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ivd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
