//! C interface to `oarray`.
//!
//! Every function returns an [`OaStatus`]; results come back through out
//! pointers. Arrays and starting-row sets are opaque handles owned by the
//! caller and released with the matching `*_free` function. On failure the
//! message for the calling thread is available from
//! [`oa_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oarray::bounds::BoundReport;
use oarray::cyclic::{develop, parse_start};
use oarray::deletion::{delete_columns, max_safe_deletions};
use oarray::designs::{parse_oa, read_oa, write_oa};
use oarray::enumerate::{self, PartitionSpec};
use oarray::hadamard_bibd::basic_binary_oa;
use oarray::verifier::verify_strength2;
use oarray::{Error, OrthogonalArray, StartingRowSet};

/// Opaque orthogonal array.
pub struct OaArray(OrthogonalArray);

/// Opaque set of starting rows.
pub struct OaStartingRows(StartingRowSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Infeasible = 5,
    Unreachable = 6,
    NotApplicable = 7,
    Verification = 8,
    TooLarge = 9,
    Overflow = 10,
    Io = 11,
    Panic = 12,
}

/// Outcome of a strength-2 check.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OaReport {
    pub is_oa: bool,
    pub lambda: u64,
    pub rows: u64,
    /// Multiplicity of the most repeated row.
    pub m: u64,
    pub optimal: bool,
    pub basic: bool,
    pub m_optimal: bool,
    /// Offending column pair and symbols when `is_oa` is false.
    pub witness_columns: [usize; 2],
    pub witness_symbols: [u8; 2],
    pub witness_count: u64,
}

/// Bounds on the repeated-row multiplicity. Rationals are numerator/denominator pairs.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OaBounds {
    pub rao_numer: i64,
    pub rao_denom: i64,
    pub floor_bound: u64,
    /// 0 when no refined bound applies.
    pub best_alpha: u64,
    pub best_numer: i64,
    pub best_denom: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OaStatus {
    match e {
        Error::Parse { .. } => OaStatus::Parse,
        Error::Domain(_) => OaStatus::Domain,
        Error::Infeasible(_) => OaStatus::Infeasible,
        Error::Unreachable { .. } => OaStatus::Unreachable,
        Error::NotApplicable { .. } => OaStatus::NotApplicable,
        Error::Verification(_) => OaStatus::Verification,
        Error::TooLarge { .. } => OaStatus::TooLarge,
        Error::Overflow(_) => OaStatus::Overflow,
        Error::Io(_) => OaStatus::Io,
    }
}

struct Fail(OaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> OaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OaStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OaStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(OaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(OaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(OaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(OaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn boxed_array(a: OrthogonalArray) -> *mut OaArray {
    Box::into_raw(Box::new(OaArray(a)))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `a` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oa_array_free(a: *mut OaArray) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oa_starting_rows_free(s: *mut OaStartingRows) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parses the `OA k n lambda` text format.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_array_parse(
    text_ptr: *const c_char,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        let a = parse_oa(text(text_ptr, "text")?)?;
        *result = boxed_array(a);
        Ok(())
    })
}

/// # Safety
/// `path` must be a nul-terminated string; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_array_read_file(
    path: *const c_char,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        let file = std::fs::File::open(text(path, "path")?).map_err(Error::from)?;
        *result = boxed_array(read_oa(std::io::BufReader::new(file))?);
        Ok(())
    })
}

/// Builds an array from `len` row-major symbols.
///
/// # Safety
/// `data` must point to `len` readable bytes; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_array_from_rows(
    k: usize,
    n: usize,
    lambda: u64,
    data: *const u8,
    len: usize,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        if data.is_null() && len > 0 {
            return Err(Fail(OaStatus::NullPointer, "data is null".into()));
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        *result = boxed_array(OrthogonalArray::from_flat(k, n, lambda, slice.to_vec())?);
        Ok(())
    })
}

/// Canonical text of the array; release with [`oa_string_free`].
///
/// # Safety
/// `a` must be a live handle; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_array_to_string(
    a: *const OaArray,
    result: *mut *mut c_char,
) -> OaStatus {
    guard(|| {
        let a = deref(a, "array")?;
        let result = out(result, "result")?;
        let mut buf = Vec::new();
        write_oa(&a.0, &mut buf).map_err(Error::from)?;
        *result = CString::new(buf).expect("no nul bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `a` must be a live handle; each out pointer must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn oa_array_dims(
    a: *const OaArray,
    k: *mut usize,
    n: *mut usize,
    lambda: *mut u64,
    rows: *mut usize,
) -> OaStatus {
    guard(|| {
        let a = &deref(a, "array")?.0;
        if let Some(k) = k.as_mut() {
            *k = a.k();
        }
        if let Some(n) = n.as_mut() {
            *n = a.n();
        }
        if let Some(l) = lambda.as_mut() {
            *l = a.lambda();
        }
        if let Some(r) = rows.as_mut() {
            *r = a.num_rows();
        }
        Ok(())
    })
}

/// Pointer to the row-major symbols, valid while `a` lives.
///
/// # Safety
/// `a` must be a live handle; `len` a valid out pointer or null.
#[no_mangle]
pub unsafe extern "C" fn oa_array_data(a: *const OaArray, len: *mut usize) -> *const u8 {
    match a.as_ref() {
        Some(a) => {
            if let Some(len) = len.as_mut() {
                *len = a.0.as_flat().len();
            }
            a.0.as_flat().as_ptr()
        }
        None => ptr::null(),
    }
}

/// # Safety
/// `a` must be a live handle; `report` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_verify(a: *const OaArray, report: *mut OaReport) -> OaStatus {
    guard(|| {
        let a = &deref(a, "array")?.0;
        let report = out(report, "report")?;
        let r = verify_strength2(a);
        let mut c = OaReport {
            is_oa: r.is_oa,
            lambda: r.lambda,
            rows: r.rows,
            m: r.m_observed,
            optimal: r.classification.optimal,
            basic: r.classification.basic,
            m_optimal: r.classification.m_optimal,
            ..OaReport::default()
        };
        if let Some(w) = r.offending {
            c.witness_columns = [w.columns.0, w.columns.1];
            c.witness_symbols = [w.symbols.0, w.symbols.1];
            c.witness_count = w.count;
        }
        *report = c;
        Ok(())
    })
}

/// Parses the `START k n m [rotation]` format.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_starting_rows_parse(
    text_ptr: *const c_char,
    result: *mut *mut OaStartingRows,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        let s = parse_start(text(text_ptr, "text")?)?;
        *result = Box::into_raw(Box::new(OaStartingRows(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle; `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_develop(
    s: *const OaStartingRows,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let s = &deref(s, "starting rows")?.0;
        let result = out(result, "result")?;
        *result = boxed_array(develop(s)?);
        Ok(())
    })
}

/// Basic `OA_{2t+1}(4t+1, 2)` from a Hadamard matrix of order `8t+4`.
///
/// # Safety
/// `result` must be a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_hadamard_basic(
    t: usize,
    block_index: usize,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = boxed_array(basic_binary_oa(t, block_index)?);
        Ok(())
    })
}

/// Optimal array of all tuples with `(k−1)/n` zeros.
///
/// # Safety
/// `result` must be a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_enumerate(k: usize, n: usize, result: *mut *mut OaArray) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = boxed_array(enumerate::enumerate_oa(k, n)?);
        Ok(())
    })
}

/// Number of parts for the given column classes (`class_sizes` null for the
/// default split, `len` 0 with a non-null pointer for the single-class split).
///
/// # Safety
/// `class_sizes` must point to `len` values or be null; `parts` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_partition_count(
    k: usize,
    n: usize,
    class_sizes: *const usize,
    len: usize,
    parts: *mut usize,
) -> OaStatus {
    guard(|| {
        let parts = out(parts, "parts")?;
        *parts = partition_spec(k, n, class_sizes, len)?.parts();
        Ok(())
    })
}

unsafe fn partition_spec(
    k: usize,
    n: usize,
    class_sizes: *const usize,
    len: usize,
) -> Result<PartitionSpec, Fail> {
    Ok(if class_sizes.is_null() {
        PartitionSpec::new(k, n, None)?
    } else if len == 0 {
        PartitionSpec::single(k, n)?
    } else {
        let sizes = std::slice::from_raw_parts(class_sizes, len).to_vec();
        PartitionSpec::new(k, n, Some(sizes))?
    })
}

/// Part `index` of the partition by per-class sums.
///
/// # Safety
/// As [`oa_partition_count`]; `result` must be a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_partition_part(
    k: usize,
    n: usize,
    class_sizes: *const usize,
    len: usize,
    index: usize,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        let spec = partition_spec(k, n, class_sizes, len)?;
        if index >= spec.parts() {
            return Err(Fail(
                OaStatus::Domain,
                format!("part {index} out of range for {} parts", spec.parts()),
            ));
        }
        let rows = spec.enumeration().rows() / spec.parts() as u128;
        if rows > enumerate::DEFAULT_THRESHOLD {
            return Err(Error::TooLarge {
                rows,
                threshold: enumerate::DEFAULT_THRESHOLD,
            }
            .into());
        }
        let mut data = Vec::with_capacity(rows as usize * k);
        enumerate::visit_parts(&spec, |part, row| {
            if part == index {
                data.extend_from_slice(row);
            }
        });
        *result = boxed_array(OrthogonalArray::from_flat(k, n, spec.part_lambda(), data)?);
        Ok(())
    })
}

/// Deletes `s` columns: `columns` (length `s`) if non-null, else the last `s`.
///
/// # Safety
/// `a` must be a live handle; `columns` null or pointing to `s` values;
/// `result` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_delete_columns(
    a: *const OaArray,
    s: usize,
    columns: *const usize,
    result: *mut *mut OaArray,
) -> OaStatus {
    guard(|| {
        let a = &deref(a, "array")?.0;
        let result = out(result, "result")?;
        let cols = (!columns.is_null()).then(|| std::slice::from_raw_parts(columns, s));
        *result = boxed_array(delete_columns(a, s, cols)?);
        Ok(())
    })
}

/// # Safety
/// `result` must be a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_bounds(k: u64, n: u64, lambda: u64, result: *mut OaBounds) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        let r = BoundReport::new(k, n, lambda)?;
        let narrow = |x: i128| {
            i64::try_from(x).map_err(|_| Fail(OaStatus::Overflow, "bound exceeds 64 bits".into()))
        };
        let mut b = OaBounds {
            rao_numer: narrow(*r.rao_bound.numer())?,
            rao_denom: narrow(*r.rao_bound.denom())?,
            floor_bound: r.floor_bound,
            ..OaBounds::default()
        };
        if let Some((alpha, best)) = r.best_refined {
            b.best_alpha = alpha;
            b.best_numer = narrow(*best.numer())?;
            b.best_denom = narrow(*best.denom())?;
        }
        *result = b;
        Ok(())
    })
}

/// # Safety
/// `result` must be a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn oa_max_safe_deletions(
    k: u64,
    n: u64,
    lambda: u64,
    result: *mut u64,
) -> OaStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = max_safe_deletions(k, n, lambda)?;
        Ok(())
    })
}
