//! Column deletion from optimal arrays.
//!
//! Dropping columns keeps the strength-2 property and every repeated row, so
//! an optimal `OA_λ(k, n)` with repeat multiplicity `m` becomes an
//! `OA_λ(k−s, n)` whose multiplicity is at least `m`. For small `s` that `m`
//! still equals the floor bound at `k−s`.

use crate::bounds::{floor_bound, rao_denominator};
use crate::designs::OrthogonalArray;
use crate::error::{Error, Result};

/// Removes `s` columns: `columns` if given, else the last `s`.
pub fn delete_columns(
    a: &OrthogonalArray,
    s: usize,
    columns: Option<&[usize]>,
) -> Result<OrthogonalArray> {
    let k = a.k();
    if s < 1 || s + 2 > k {
        return Err(Error::domain(format!(
            "s = {s} must lie in 1..={}",
            k.saturating_sub(2)
        )));
    }
    let mut drop = vec![false; k];
    match columns {
        Some(cols) => {
            if cols.len() != s {
                return Err(Error::domain(format!(
                    "{} columns given for s = {s}",
                    cols.len()
                )));
            }
            for &c in cols {
                if c >= k {
                    return Err(Error::domain(format!(
                        "column {c} out of range for k = {k}"
                    )));
                }
                if std::mem::replace(&mut drop[c], true) {
                    return Err(Error::domain(format!("column {c} listed twice")));
                }
            }
        }
        None => drop[k - s..].iter_mut().for_each(|d| *d = true),
    }
    let keep: Vec<usize> = (0..k).filter(|&c| !drop[c]).collect();
    a.select_columns(&keep)
}

fn optimal_multiplicity(k: u64, n: u64, lambda: u64) -> Option<u64> {
    if k < 2 || n < 2 || lambda < 1 {
        return None;
    }
    let rows = lambda * n * n;
    let denom = rao_denominator(k, n);
    rows.is_multiple_of(denom).then(|| rows / denom)
}

/// Largest `s` with `s < (k(n−1)+1)² / ((n−1)(λn² + k(n−1)+1))`, or 0.
///
/// Deleting up to that many columns from an optimal array leaves it
/// m-optimal.
pub fn max_safe_deletions(k: u64, n: u64, lambda: u64) -> Result<u64> {
    if optimal_multiplicity(k, n, lambda).is_none() {
        return Err(Error::infeasible(format!(
            "lambda*n^2 is not a multiple of k(n-1)+1 for (k, n, lambda) = ({k}, {n}, {lambda})"
        )));
    }
    let denom = rao_denominator(k, n) as u128;
    let numer = denom * denom;
    let divisor = (n as u128 - 1) * (lambda as u128 * (n as u128).pow(2) + denom);
    Ok(((numer - 1) / divisor) as u64)
}

/// Whether the optimal multiplicity at `k` equals the floor bound at `k − s`.
pub fn m_optimal_after_deletion(k: u64, n: u64, lambda: u64, s: u64) -> bool {
    let Some(m) = optimal_multiplicity(k, n, lambda) else {
        return false;
    };
    k.checked_sub(s)
        .and_then(|rest| floor_bound(rest, n, lambda).ok())
        .is_some_and(|f| f == m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::parse_oa;
    use crate::verifier::verify_strength2;

    const SMALL_OA: &str = "OA 5 2 3\n0 0 0 0 0\n0 0 0 0 0\n0 0 1 1 1\n1 0 0 1 1\n1 1 0 0 1\n\
        1 1 1 0 0\n0 1 1 1 0\n0 1 0 1 1\n1 0 1 0 1\n1 1 0 1 0\n0 1 1 0 1\n1 0 1 1 0\n";

    #[test]
    fn small_oa_minus_one_column() {
        let a = parse_oa(SMALL_OA).unwrap();
        for c in 0..5 {
            let d = delete_columns(&a, 1, Some(&[c])).unwrap();
            let report = verify_strength2(&d);
            assert!(report.is_oa);
            assert_eq!((d.k(), d.lambda(), report.m_observed), (4, 3, 2));
            assert!(report.classification.m_optimal);
            assert!(!report.classification.optimal);
        }
    }

    #[test]
    fn default_drops_trailing_columns() {
        let a = parse_oa(SMALL_OA).unwrap();
        let d = delete_columns(&a, 2, None).unwrap();
        assert_eq!(d, a.select_columns(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn argument_errors() {
        let a = parse_oa(SMALL_OA).unwrap();
        assert!(delete_columns(&a, 0, None).is_err());
        assert!(delete_columns(&a, 4, None).is_err());
        assert!(delete_columns(&a, 2, Some(&[1, 1])).is_err());
        assert!(delete_columns(&a, 2, Some(&[1])).is_err());
        assert!(delete_columns(&a, 1, Some(&[5])).is_err());
    }

    #[test]
    fn safe_deletion_counts() {
        assert_eq!(max_safe_deletions(13, 2, 7).unwrap(), 4);
        assert_eq!(max_safe_deletions(5, 2, 3).unwrap(), 1);
        assert_eq!(max_safe_deletions(7, 3, 5).unwrap(), 1);
        assert_eq!(max_safe_deletions(3, 2, 1).unwrap(), 1);
        assert!(max_safe_deletions(5, 3, 3).is_err());
    }

    #[test]
    fn m_optimality_after_deletion() {
        assert!(m_optimal_after_deletion(13, 2, 7, 4));
        assert!(!m_optimal_after_deletion(13, 2, 7, 5));
        assert!(m_optimal_after_deletion(13, 2, 7, 0));
        assert!(m_optimal_after_deletion(7, 3, 5, 1));
        assert!(!m_optimal_after_deletion(5, 3, 3, 1));
        for k in (5..=41u64).step_by(4) {
            let lambda = k.div_ceil(2);
            let safe = max_safe_deletions(k, 2, lambda).unwrap();
            for s in 0..=safe {
                assert!(m_optimal_after_deletion(k, 2, lambda, s), "k={k} s={s}");
            }
        }
    }

    #[test]
    fn stacking_floor_arithmetic() {
        assert_eq!(floor_bound(5, 3, 3).unwrap(), 2);
        assert_eq!(floor_bound(5, 3, 6).unwrap(), 4);
        assert_eq!(floor_bound(5, 3, 9).unwrap(), 7);
        // m = 2 per copy: two copies give 4 (m-optimal), three give 6 < 7
        assert_eq!(2 * 2, floor_bound(5, 3, 6).unwrap());
        assert_ne!(3 * 2, floor_bound(5, 3, 9).unwrap());
    }
}
