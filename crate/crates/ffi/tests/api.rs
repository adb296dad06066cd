use std::ffi::{CStr, CString};
use std::ptr;

use oarray_ffi::*;

const SMALL_OA: &str = "OA 5 2 3\n0 0 0 0 0\n0 0 0 0 0\n0 0 1 1 1\n1 0 0 1 1\n1 1 0 0 1\n\
    1 1 1 0 0\n0 1 1 1 0\n0 1 0 1 1\n1 0 1 0 1\n1 1 0 1 0\n0 1 1 0 1\n1 0 1 1 0\n";

fn last_error() -> String {
    let p = oa_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> *mut OaArray {
    let c = CString::new(text).unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { oa_array_parse(c.as_ptr(), &mut a) }, OaStatus::Ok);
    a
}

fn report(a: *const OaArray) -> OaReport {
    let mut r = OaReport::default();
    assert_eq!(unsafe { oa_verify(a, &mut r) }, OaStatus::Ok);
    r
}

#[test]
fn parse_verify_and_print() {
    let a = parse(SMALL_OA);
    let r = report(a);
    assert!(r.is_oa && r.optimal && r.basic && r.m_optimal);
    assert_eq!((r.lambda, r.m, r.rows), (3, 2, 12));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { oa_array_to_string(a, &mut s) }, OaStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), SMALL_OA);
    unsafe { oa_string_free(s) };

    let (mut k, mut n, mut lambda, mut rows) = (0, 0, 0, 0);
    assert_eq!(
        unsafe { oa_array_dims(a, &mut k, &mut n, &mut lambda, &mut rows) },
        OaStatus::Ok
    );
    assert_eq!((k, n, lambda, rows), (5, 2, 3, 12));
    let mut len = 0;
    let data = unsafe { oa_array_data(a, &mut len) };
    assert_eq!(len, 60);
    assert_eq!(
        unsafe { std::slice::from_raw_parts(data, 5) },
        &[0, 0, 0, 0, 0]
    );
    unsafe { oa_array_free(a) };
}

#[test]
fn witness_for_corrupted_array() {
    let mut data: Vec<u8> = SMALL_OA
        .lines()
        .skip(1)
        .flat_map(|l| {
            l.split(' ')
                .map(|t| t.parse::<u8>().unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    data[10] = 1;
    let mut a = ptr::null_mut();
    let status = unsafe { oa_array_from_rows(5, 2, 3, data.as_ptr(), data.len(), &mut a) };
    assert_eq!(status, OaStatus::Ok);
    let r = report(a);
    assert!(!r.is_oa);
    assert_ne!(r.witness_count, 3);
    assert!(!r.optimal);
    unsafe { oa_array_free(a) };
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("OA 5 2 3\n0 0\n").unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { oa_array_parse(bad.as_ptr(), &mut a) },
        OaStatus::Parse
    );
    assert!(a.is_null());
    assert!(last_error().contains("line 2"));

    assert_eq!(
        unsafe { oa_hadamard_basic(11, 0, &mut a) },
        OaStatus::Unreachable
    );
    assert!(last_error().contains("92"));

    assert_eq!(unsafe { oa_enumerate(6, 3, &mut a) }, OaStatus::Infeasible);
    assert_eq!(
        unsafe { oa_array_parse(ptr::null(), &mut a) },
        OaStatus::NullPointer
    );
    assert_eq!(
        unsafe { oa_verify(ptr::null(), ptr::null_mut()) },
        OaStatus::NullPointer
    );
}

#[test]
fn develop_starting_rows() {
    let text = CString::new("START 5 2 2\n* * 0 0 0\n* 0 * 0 0\n").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { oa_starting_rows_parse(text.as_ptr(), &mut s) },
        OaStatus::Ok
    );
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { oa_develop(s, &mut a) }, OaStatus::Ok);
    let r = report(a);
    assert!(r.is_oa && r.basic);
    let mut printed = ptr::null_mut();
    unsafe { oa_array_to_string(a, &mut printed) };
    let mut lines: Vec<&str> = unsafe { CStr::from_ptr(printed) }
        .to_str()
        .unwrap()
        .lines()
        .collect();
    let mut expected: Vec<&str> = SMALL_OA.lines().collect();
    lines.sort();
    expected.sort();
    assert_eq!(lines, expected);
    unsafe {
        oa_string_free(printed);
        oa_array_free(a);
        oa_starting_rows_free(s);
    }
}

#[test]
fn constructions() {
    for t in 1..=3 {
        let mut a = ptr::null_mut();
        assert_eq!(unsafe { oa_hadamard_basic(t, 0, &mut a) }, OaStatus::Ok);
        let r = report(a);
        assert!(r.is_oa && r.basic);
        assert_eq!((r.lambda, r.m), (2 * t as u64 + 1, 2));
        unsafe { oa_array_free(a) };
    }

    let mut a = ptr::null_mut();
    assert_eq!(unsafe { oa_enumerate(7, 3, &mut a) }, OaStatus::Ok);
    let r = report(a);
    assert_eq!((r.lambda, r.m, r.optimal), (80, 48, true));

    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { oa_delete_columns(a, 1, ptr::null(), &mut d) },
        OaStatus::Ok
    );
    let r = report(d);
    // no safe deletion at lambda = 80
    assert!(r.is_oa && !r.m_optimal);
    assert_eq!(r.m, 48);
    let cols = [0usize, 0];
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { oa_delete_columns(a, 2, cols.as_ptr(), &mut e) },
        OaStatus::Domain
    );
    unsafe {
        oa_array_free(d);
        oa_array_free(a);
    }
}

#[test]
fn partitions() {
    let mut parts = 0;
    assert_eq!(
        unsafe { oa_partition_count(7, 3, ptr::null(), 0, &mut parts) },
        OaStatus::Ok
    );
    assert_eq!(parts, 2);
    for i in 0..parts {
        let mut a = ptr::null_mut();
        assert_eq!(
            unsafe { oa_partition_part(7, 3, ptr::null(), 0, i, &mut a) },
            OaStatus::Ok
        );
        let r = report(a);
        assert!(r.is_oa && r.optimal);
        assert_eq!((r.lambda, r.m), (40, 24));
        unsafe { oa_array_free(a) };
    }
    let sizes = [8usize, 8];
    assert_eq!(
        unsafe { oa_partition_count(16, 3, sizes.as_ptr(), 2, &mut parts) },
        OaStatus::Ok
    );
    assert_eq!(parts, 4);
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { oa_partition_part(7, 3, ptr::null(), 0, 2, &mut a) },
        OaStatus::Domain
    );
}

#[test]
fn bounds() {
    let mut b = OaBounds::default();
    assert_eq!(unsafe { oa_bounds(5, 3, 3, &mut b) }, OaStatus::Ok);
    assert_eq!((b.rao_numer, b.rao_denom, b.floor_bound), (27, 11, 2));
    assert_eq!(unsafe { oa_bounds(6, 3, 5, &mut b) }, OaStatus::Ok);
    assert_eq!((b.best_numer, b.best_denom), (3, 1));
    let mut s = 0;
    assert_eq!(
        unsafe { oa_max_safe_deletions(13, 2, 7, &mut s) },
        OaStatus::Ok
    );
    assert_eq!(s, 4);
    assert_eq!(
        unsafe { oa_max_safe_deletions(5, 3, 3, &mut s) },
        OaStatus::Infeasible
    );
    assert_eq!(unsafe { oa_bounds(1, 3, 3, &mut b) }, OaStatus::Domain);
}
