//! C interface to `qmix`.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns a [`QmixStatus`]; on failure the message is
//! available from [`qmix_last_error_message`] on the same thread.
//!
//! Functions on a group take values as `2 * n` doubles holding interleaved
//! real and imaginary parts.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use qmix::mixing::{count_progressions, theorem_bound, theta_defect, MixingReport};
use qmix::{
    compute_character_table, conjugacy_classes, construct_group, parse_spec, CharacterTable,
    Error, GroupFunction, GroupTable,
};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    OutOfRange = 4,
    Precondition = 5,
    Certification = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// A finite group with its multiplication law.
pub struct QmixGroup {
    group: GroupTable,
}

/// A certified character table of a group.
pub struct QmixCharTable {
    table: CharacterTable,
}

/// The mixing defect of a triple of functions and the bound it is compared
/// against.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QmixMixingReport {
    pub theta: f64,
    pub raw_re: f64,
    pub raw_im: f64,
    pub product_re: f64,
    pub product_im: f64,
    pub bound: f64,
    pub quasirandom_degree: usize,
    pub margin: f64,
    /// Nonzero when the bound is at least 1 or the group is not quasirandom.
    pub vacuous: u8,
    /// Nonzero when some input has sup norm above 1.
    pub sup_norm_exceeded: u8,
}

impl From<&MixingReport> for QmixMixingReport {
    fn from(r: &MixingReport) -> Self {
        QmixMixingReport {
            theta: r.theta,
            raw_re: r.raw_expectation.re,
            raw_im: r.raw_expectation.im,
            product_re: r.product_of_means.re,
            product_im: r.product_of_means.im,
            bound: r.bound,
            quasirandom_degree: r.d,
            margin: r.margin,
            vacuous: r.vacuous as u8,
            sup_norm_exceeded: r.sup_norm_exceeded as u8,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QmixStatus {
    match e {
        Error::Syntax { .. } | Error::OutOfRange(_) | Error::NotOddPrime(_) | Error::TrivialGroup => {
            QmixStatus::InvalidSpec
        }
        Error::TooLarge { .. } | Error::IndexOutOfRange { .. } => QmixStatus::OutOfRange,
        Error::Certification(_) => QmixStatus::Certification,
        _ => QmixStatus::Precondition,
    }
}

/// Run `body`, recording any error or panic in the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), QmixStatus>) -> QmixStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QmixStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            QmixStatus::Internal
        }
    }
}

fn fail(e: Error) -> QmixStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> QmixStatus {
    set_error(&format!("{what} is null"));
    QmixStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, QmixStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn function(group: &GroupTable, values: *const f64, what: &str) -> Result<GroupFunction, QmixStatus> {
    if values.is_null() {
        return Err(null(what));
    }
    let raw = slice::from_raw_parts(values, 2 * group.order());
    let v = raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    GroupFunction::new(group, v).map_err(fail)
}

unsafe fn index_set<'a>(set: *const usize, len: usize, what: &str) -> Result<&'a [usize], QmixStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if set.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(set, len))
}

/// Message describing the last failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qmix_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qmix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build the group named by `spec`, e.g. `"psl2:7"` or `"prod:cyclic:2+alt:5"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_group_new(spec: *const c_char, out: *mut *mut QmixGroup) -> QmixStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(spec).to_str().map_err(|_| {
            set_error("spec is not valid UTF-8");
            QmixStatus::InvalidUtf8
        })?;
        let group = parse_spec(text).and_then(|s| construct_group(&s)).map_err(fail)?;
        *out = Box::into_raw(Box::new(QmixGroup { group }));
        Ok(())
    })
}

/// Release a group. Null is ignored.
///
/// # Safety
/// `group` must come from [`qmix_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qmix_group_free(group: *mut QmixGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Order of the group, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmix_group_order(group: *const QmixGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.order())
}

/// `*out = a * b` in the canonical element indexing.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_group_mul(group: *const QmixGroup, a: usize, b: usize, out: *mut usize) -> QmixStatus {
    guard(|| {
        let g = &deref(group, "group")?.group;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = g.try_mul(a, b).map_err(fail)?;
        Ok(())
    })
}

/// `*out = a^-1`.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_group_inv(group: *const QmixGroup, a: usize, out: *mut usize) -> QmixStatus {
    guard(|| {
        let g = &deref(group, "group")?.group;
        if out.is_null() {
            return Err(null("out"));
        }
        g.check_index(a).map_err(fail)?;
        *out = g.inv(a);
        Ok(())
    })
}

/// Compute and certify the character table of `group`. `seed` fixes the
/// random combination of class sums used by the eigensolver.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_new(
    group: *const QmixGroup,
    seed: u64,
    out: *mut *mut QmixCharTable,
) -> QmixStatus {
    guard(|| {
        let g = &deref(group, "group")?.group;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let classes = conjugacy_classes(g);
        let table = compute_character_table(g, &classes, seed, qmix::chartab::DEFAULT_TOL).map_err(fail)?;
        *out = Box::into_raw(Box::new(QmixCharTable { table }));
        Ok(())
    })
}

/// Release a character table. Null is ignored.
///
/// # Safety
/// `table` must come from [`qmix_chartab_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_free(table: *mut QmixCharTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of conjugacy classes (and irreducibles), or 0 for null.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_num_classes(table: *const QmixCharTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.k)
}

/// Copy the irreducible degrees into `buf`. `*written` receives the number
/// of degrees, including when `len` is too small.
///
/// # Safety
/// `buf` must hold `len` elements and `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_degrees(
    table: *const QmixCharTable,
    buf: *mut usize,
    len: usize,
    written: *mut usize,
) -> QmixStatus {
    guard(|| {
        let t = &deref(table, "table")?.table;
        if written.is_null() {
            return Err(null("written"));
        }
        *written = t.k;
        if len < t.k {
            set_error(&format!("buffer holds {len} degrees, {} needed", t.k));
            return Err(QmixStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        slice::from_raw_parts_mut(buf, t.k).copy_from_slice(&t.degrees);
        Ok(())
    })
}

/// Smallest nontrivial irreducible degree, or 0 for null.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_quasirandom_degree(table: *const QmixCharTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.quasirandom_degree())
}

/// `*out = sum of d^-s over the nontrivial irreducibles`.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_chartab_zeta(table: *const QmixCharTable, s: f64, out: *mut f64) -> QmixStatus {
    guard(|| {
        let t = &deref(table, "table")?.table;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = t.witten_zeta(s);
        Ok(())
    })
}

/// Mixing defect `|E f1(x) f2(xy) f3(xy^2) - E f1 E f2 E f3|` of three
/// complex functions, each given as `2 * n` interleaved doubles.
///
/// # Safety
/// Handles must be live, each `f` must hold `2 * n` doubles where `n` is
/// the group order, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qmix_theta_defect(
    group: *const QmixGroup,
    table: *const QmixCharTable,
    f1: *const f64,
    f2: *const f64,
    f3: *const f64,
    out: *mut QmixMixingReport,
) -> QmixStatus {
    guard(|| {
        let g = &deref(group, "group")?.group;
        let t = &deref(table, "table")?.table;
        if out.is_null() {
            return Err(null("out"));
        }
        if t.n != g.order() {
            set_error("character table belongs to a different group");
            return Err(QmixStatus::Precondition);
        }
        let f1 = function(g, f1, "f1")?;
        let f2 = function(g, f2, "f2")?;
        let f3 = function(g, f3, "f3")?;
        let r = theta_defect(g, &f1, &f2, &f3, t).map_err(fail)?;
        *out = QmixMixingReport::from(&r);
        Ok(())
    })
}

/// `*out = #{(x, y) : x in A1, xy in A2, xy^2 in A3}`.
///
/// # Safety
/// Each set pointer must hold its stated number of indices (it may be null
/// when the length is 0); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qmix_count_progressions(
    group: *const QmixGroup,
    a1: *const usize,
    len1: usize,
    a2: *const usize,
    len2: usize,
    a3: *const usize,
    len3: usize,
    out: *mut u64,
) -> QmixStatus {
    guard(|| {
        let g = &deref(group, "group")?.group;
        if out.is_null() {
            return Err(null("out"));
        }
        let sets = [
            index_set(a1, len1, "a1")?,
            index_set(a2, len2, "a2")?,
            index_set(a3, len3, "a3")?,
        ];
        *out = count_progressions(g, sets).map_err(fail)?;
        Ok(())
    })
}

/// `*out = (2 / sqrt(d))^(1/4)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_theorem_bound(d: usize, out: *mut f64) -> QmixStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = theorem_bound(d).map_err(fail)?;
        Ok(())
    })
}
