//! C ABI over `pmoderate`.
//!
//! Groups live behind an opaque `PmGroup` handle. Every function returns a
//! `PmStatus`; on failure a message is available from `pm_last_error_message`
//! on the same thread. Strings returned through out-parameters are owned by
//! the caller and released with `pm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pmoderate::census::{census, prop31_certificate, randomized_witness_from_z, sylow_cover_bound};
use pmoderate::classify::{classify_moderation, is_p_concealed, SearchOptions, Strategy};
use pmoderate::report::CertificatePayload;
use pmoderate::zoo::{GroupInstance, GroupSpec};
use pmoderate::{Error, Limits};

/// Opaque handle to a permutation group.
pub struct PmGroup {
    inst: GroupInstance,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    ResourceLimit = 4,
    PrimeDoesNotDivide = 5,
    ElementaryAbelian = 6,
    Undecided = 7,
    Precondition = 8,
    Overflow = 9,
    Panic = 10,
    Other = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStrategy {
    Exhaustive = 0,
    Constructive = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmVerdict {
    Moderate = 0,
    Extreme = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(error: &Error) -> PmStatus {
    match error {
        Error::Parse { .. }
        | Error::PointOutOfRange { .. }
        | Error::RepeatedPoint(_)
        | Error::DegreeMismatch { .. }
        | Error::NotABijection
        | Error::UnknownGroup(_)
        | Error::NonInvertibleMatrix
        | Error::InvalidSpec(_) => PmStatus::InvalidSpec,
        Error::ResourceLimit(_) => PmStatus::ResourceLimit,
        Error::PrimeDoesNotDivide { .. } | Error::NotPrime(_) => PmStatus::PrimeDoesNotDivide,
        Error::ElementaryAbelian(_) => PmStatus::ElementaryAbelian,
        Error::Undecided(_) => PmStatus::Undecided,
        Error::Precondition(_) | Error::NotPGroup(_) | Error::NotSubgroup | Error::Intransitive => {
            PmStatus::Precondition
        }
    }
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), (PmStatus, String)>) -> PmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PmStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PmStatus::Panic
        }
    }
}

fn lib<T>(r: pmoderate::Result<T>) -> Result<T, (PmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, (PmStatus, String)> {
    if text.is_null() {
        return Err((PmStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(text).to_str().map_err(|_| (PmStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn group_ref<'a>(group: *const PmGroup) -> Result<&'a PmGroup, (PmStatus, String)> {
    group.as_ref().ok_or((PmStatus::NullPointer, "null group handle".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), (PmStatus, String)> {
    if out.is_null() {
        return Err((PmStatus::NullPointer, "null output pointer".into()));
    }
    Ok(())
}

unsafe fn write_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> Result<(), (PmStatus, String)> {
    let text = serde_json::to_string(value).map_err(|e| (PmStatus::Other, e.to_string()))?;
    *out = CString::new(text).map_err(|e| (PmStatus::Other, e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn build(spec: pmoderate::Result<GroupSpec>, out: *mut *mut PmGroup) -> Result<(), (PmStatus, String)> {
    check_out(out)?;
    let inst = lib(spec.and_then(|s| s.build(Limits::default())))?;
    *out = Box::into_raw(Box::new(PmGroup { inst }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failure on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a group from a JSON group specification.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_group_from_json(json: *const c_char, out: *mut *mut PmGroup) -> PmStatus {
    guard(|| {
        let json = read_str(json)?;
        build(GroupSpec::from_json(json), out)
    })
}

/// Builds a built-in group by name, e.g. `"Product(D6,D6)"`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_group_from_name(name: *const c_char, out: *mut *mut PmGroup) -> PmStatus {
    guard(|| {
        let name = read_str(name)?;
        build(Ok(GroupSpec::named(name)), out)
    })
}

/// Releases a group handle. Null is ignored.
///
/// # Safety
/// `group` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_group_free(group: *mut PmGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pm_group_degree(group: *const PmGroup, out: *mut usize) -> PmStatus {
    guard(|| {
        check_out(out)?;
        *out = group_ref(group)?.inst.group.degree();
        Ok(())
    })
}

/// Group order; `Overflow` when it does not fit in 64 bits.
///
/// # Safety
/// `group` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pm_group_order(group: *const PmGroup, out: *mut u64) -> PmStatus {
    guard(|| {
        check_out(out)?;
        let order = lib(group_ref(group)?.inst.group.order())?;
        *out = u64::try_from(order).map_err(|_| (PmStatus::Overflow, format!("order {order} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Whether every subset is stabilized by some Sylow `p`-subgroup.
///
/// # Safety
/// `group` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pm_is_concealed(group: *const PmGroup, p: u64, out: *mut bool) -> PmStatus {
    guard(|| {
        check_out(out)?;
        *out = lib(is_p_concealed(&group_ref(group)?.inst.group, p))?.concealed;
        Ok(())
    })
}

/// Classifies the group at `p`; writes the verdict and the full report as JSON.
///
/// # Safety
/// `group`, `verdict` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pm_classify(
    group: *const PmGroup,
    p: u64,
    strategy: PmStrategy,
    seed: u64,
    verdict: *mut PmVerdict,
    out_json: *mut *mut c_char,
) -> PmStatus {
    guard(|| {
        check_out(verdict)?;
        check_out(out_json)?;
        let strategy = match strategy {
            PmStrategy::Exhaustive => Strategy::Exhaustive,
            PmStrategy::Constructive => Strategy::Constructive,
        };
        let options = SearchOptions { seed, ..SearchOptions::default() };
        let report = lib(classify_moderation(&group_ref(group)?.inst, p, strategy, options))?;
        write_json(&report, out_json)?;
        *verdict = if report.is_moderate() { PmVerdict::Moderate } else { PmVerdict::Extreme };
        Ok(())
    })
}

/// Histogram of stabilizer `p`-parts over all subsets, as JSON.
///
/// # Safety
/// `group` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pm_census(group: *const PmGroup, p: u64, out_json: *mut *mut c_char) -> PmStatus {
    guard(|| {
        check_out(out_json)?;
        write_json(&lib(census(&group_ref(group)?.inst.group, p))?, out_json)
    })
}

/// The counting certificate with its cover bound and, when conclusive, a random witness.
///
/// # Safety
/// `group` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pm_prop31(
    group: *const PmGroup,
    p: u64,
    trials: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> PmStatus {
    guard(|| {
        check_out(out_json)?;
        let g = &group_ref(group)?.inst.group;
        let certificate = lib(prop31_certificate(g, p))?;
        let cover_bound = lib(sylow_cover_bound(g, p))?;
        let random_witness = if certificate.verdict {
            lib(randomized_witness_from_z(g, p, &certificate.z, trials, seed))?
        } else {
            None
        };
        write_json(&CertificatePayload { certificate, cover_bound, random_witness }, out_json)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
