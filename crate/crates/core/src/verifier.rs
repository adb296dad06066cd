//! Exhaustive strength-2 verification and classification.
//!
//! Two counting paths exist: [`verify_strength2`] walks the materialized array
//! one column pair at a time, while [`StreamingVerifier`] accepts rows one at a
//! time and updates every column pair per row. They produce identical reports.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::bounds;
use crate::designs::{check_dimensions, OrthogonalArray};
use crate::error::{Error, Result};

/// A column pair and symbol pair whose joint count differs from λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub columns: (usize, usize),
    pub symbols: (u8, u8),
    pub count: u64,
    pub expected: u64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "columns ({}, {}) symbols ({}, {}) occur {} times, expected {}",
            self.columns.0,
            self.columns.1,
            self.symbols.0,
            self.symbols.1,
            self.count,
            self.expected
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Classification {
    pub optimal: bool,
    pub basic: bool,
    pub m_optimal: bool,
}

impl Classification {
    /// Labels implied by a repeated row of multiplicity `m` in an
    /// `OA_λ(k, n)`.
    pub fn for_parameters(k: u64, n: u64, lambda: u64, m: u64) -> Self {
        let rows = lambda as u128 * (n as u128) * (n as u128);
        let denom = bounds::rao_denominator(k, n) as u128;
        let optimal = m as u128 * denom == rows;
        Self {
            optimal,
            basic: optimal && m.gcd(&lambda) == 1,
            m_optimal: m as u128 == rows / denom,
        }
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.optimal {
            out.push("optimal");
        }
        if self.basic {
            out.push("basic");
        }
        if self.m_optimal {
            out.push("m-optimal");
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        !(self.optimal || self.basic || self.m_optimal)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.labels();
        if labels.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&labels.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub k: usize,
    pub n: usize,
    /// The index the array claims.
    pub lambda: u64,
    pub rows: u64,
    pub is_oa: bool,
    /// The common joint count, when every count agrees.
    pub lambda_observed: Option<u64>,
    pub offending: Option<Witness>,
    /// A row of maximum multiplicity (lexicographically smallest on ties).
    pub repeated_row: Vec<u8>,
    pub m_observed: u64,
    /// Zero count `aᵢ` ↦ number of rows, over rows other than the repeated copies.
    pub zero_count_histogram: BTreeMap<usize, u64>,
    /// Empty unless `is_oa`.
    pub classification: Classification,
}

impl fmt::Display for VerificationReport {
    /// One line: `OA: yes, lambda=3, m=2, classes: optimal basic m-optimal`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_oa {
            write!(
                f,
                "OA: yes, lambda={}, m={}, classes: {}",
                self.lambda, self.m_observed, self.classification
            )
        } else {
            write!(f, "OA: no, lambda={}", self.lambda)?;
            if let Some(w) = &self.offending {
                write!(f, ", {w}")?;
            }
            Ok(())
        }
    }
}

/// Joint counts for all unordered column pairs `i < j`, pair-major.
struct PairCounts {
    k: usize,
    n: usize,
    counts: Vec<u64>,
}

impl PairCounts {
    fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            counts: vec![0; k * (k - 1) / 2 * n * n],
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.k;
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
    }

    /// Uniform count if there is one, else the first deviation from `lambda`.
    fn analyze(&self, lambda: u64) -> (Option<u64>, Option<Witness>) {
        let nn = self.n * self.n;
        let first = self.counts.first().copied();
        let uniform = first.filter(|&c| self.counts.iter().all(|&x| x == c));
        let witness = self.counts.iter().position(|&c| c != lambda).map(|idx| {
            let (pair, cell) = (idx / nn, idx % nn);
            Witness {
                columns: self.pairs().nth(pair).expect("pair index in range"),
                symbols: ((cell / self.n) as u8, (cell % self.n) as u8),
                count: self.counts[idx],
                expected: lambda,
            }
        });
        (uniform, witness)
    }
}

fn zero_count(row: &[u8]) -> usize {
    row.iter().filter(|&&s| s == 0).count()
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    k: usize,
    n: usize,
    lambda: u64,
    rows: u64,
    counts: &PairCounts,
    repeated_row: Vec<u8>,
    m_observed: u64,
    mut histogram: BTreeMap<usize, u64>,
) -> VerificationReport {
    let (lambda_observed, offending) = counts.analyze(lambda);
    let is_oa = offending.is_none();
    if m_observed > 0 {
        let z = zero_count(&repeated_row);
        if let Some(c) = histogram.get_mut(&z) {
            *c -= m_observed;
            if *c == 0 {
                histogram.remove(&z);
            }
        }
    }
    let classification = if is_oa {
        Classification::for_parameters(k as u64, n as u64, lambda, m_observed)
    } else {
        Classification::default()
    };
    VerificationReport {
        k,
        n,
        lambda,
        rows,
        is_oa,
        lambda_observed,
        offending,
        repeated_row,
        m_observed,
        zero_count_histogram: histogram,
        classification,
    }
}

/// Counts every ordered symbol pair in every column pair of `a`.
pub fn verify_strength2(a: &OrthogonalArray) -> VerificationReport {
    let (k, n) = (a.k(), a.n());
    let nn = n * n;
    let data = a.as_flat();
    let mut counts = PairCounts::new(k, n);
    for (p, (i, j)) in counts.pairs().collect::<Vec<_>>().into_iter().enumerate() {
        let cell = &mut counts.counts[p * nn..(p + 1) * nn];
        for row in data.chunks_exact(k) {
            cell[row[i] as usize * n + row[j] as usize] += 1;
        }
    }
    let (repeated, m) = repeated_row(a);
    let mut histogram = BTreeMap::new();
    for row in a.rows() {
        *histogram.entry(zero_count(row)).or_insert(0) += 1;
    }
    finish_report(
        k,
        n,
        a.lambda(),
        a.num_rows() as u64,
        &counts,
        repeated,
        m,
        histogram,
    )
}

/// A row of maximum multiplicity (lexicographically smallest on ties).
pub fn repeated_row(a: &OrthogonalArray) -> (Vec<u8>, u64) {
    let sorted = a.sorted_rows();
    let (row, m) = max_run(&sorted).expect("arrays have at least one row");
    (row.to_vec(), m)
}

/// Whether every row other than the repeated all-zero rows has exactly
/// `(k−1)/n` zeros. False when `(k−1)/n` is not an integer.
pub fn zero_count_check(a: &OrthogonalArray) -> Result<bool> {
    let (row, _) = repeated_row(a);
    if row.iter().any(|&s| s != 0) {
        return Err(Error::domain(
            "the repeated row is not the all-zero row; relabel symbols first",
        ));
    }
    let Some(abar) = bounds::abar(a.k() as u64, a.n() as u64) else {
        return Ok(false);
    };
    Ok(a.rows()
        .map(zero_count)
        .filter(|&z| z != a.k())
        .all(|z| z as u64 == abar))
}

/// The optimal / basic / m-optimal labels of `a`; empty if `a` is not an OA.
pub fn classify(a: &OrthogonalArray) -> Classification {
    verify_strength2(a).classification
}

enum RowStore {
    /// Rows packed most-significant-symbol first into fixed-width fields, so
    /// integer order is lexicographic row order.
    Packed {
        bits: u32,
        keys: Vec<u128>,
    },
    Raw(Vec<Box<[u8]>>),
}

/// Accepts rows one at a time and accumulates the same data as
/// [`verify_strength2`], without materializing the array.
pub struct StreamingVerifier {
    k: usize,
    n: usize,
    counts: PairCounts,
    store: RowStore,
    zero_hist: Vec<u64>,
    rows: u64,
}

impl StreamingVerifier {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        check_dimensions(k, n, 1)?;
        let bits = usize::BITS - (n - 1).leading_zeros();
        let store = if bits as usize * k <= 128 {
            RowStore::Packed {
                bits,
                keys: Vec::new(),
            }
        } else {
            RowStore::Raw(Vec::new())
        };
        Ok(Self {
            k,
            n,
            counts: PairCounts::new(k, n),
            store,
            zero_hist: vec![0; k + 1],
            rows: 0,
        })
    }

    pub fn with_capacity(k: usize, n: usize, rows: usize) -> Result<Self> {
        let mut v = Self::new(k, n)?;
        match &mut v.store {
            RowStore::Packed { keys, .. } => keys.reserve_exact(rows),
            RowStore::Raw(r) => r.reserve_exact(rows),
        }
        Ok(v)
    }

    /// # Panics
    /// If `row` has the wrong length or a symbol outside `0..n`.
    pub fn push(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.k, "row length must equal k");
        let (k, n) = (self.k, self.n);
        let nn = n * n;
        let mut zeros = 0;
        let mut p = 0;
        for i in 0..k {
            let s = row[i] as usize;
            assert!(s < n, "symbol {s} outside 0..{n}");
            zeros += (s == 0) as usize;
            let base = s * n;
            for &t in &row[i + 1..] {
                self.counts.counts[p * nn + base + t as usize] += 1;
                p += 1;
            }
        }
        self.zero_hist[zeros] += 1;
        match &mut self.store {
            RowStore::Packed { bits, keys } => {
                let key = row.iter().fold(0u128, |acc, &s| (acc << *bits) | s as u128);
                keys.push(key);
            }
            RowStore::Raw(rows) => rows.push(row.into()),
        }
        self.rows += 1;
    }

    pub fn rows_seen(&self) -> u64 {
        self.rows
    }

    /// Completes the report against the claimed index `lambda`.
    pub fn finish(mut self, lambda: u64) -> VerificationReport {
        let (repeated, m) = match &mut self.store {
            RowStore::Packed { bits, keys } => {
                keys.sort_unstable();
                match max_run(keys) {
                    Some((key, m)) => {
                        let mask = (1u128 << *bits) - 1;
                        let row = (0..self.k)
                            .rev()
                            .map(|i| ((key >> (i as u32 * *bits)) & mask) as u8)
                            .collect();
                        (row, m)
                    }
                    None => (Vec::new(), 0),
                }
            }
            RowStore::Raw(rows) => {
                rows.sort_unstable();
                match max_run(rows) {
                    Some((row, m)) => (row.to_vec(), m),
                    None => (Vec::new(), 0),
                }
            }
        };
        let histogram = self
            .zero_hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(z, &c)| (z, c))
            .collect();
        finish_report(
            self.k,
            self.n,
            lambda,
            self.rows,
            &self.counts,
            repeated,
            m,
            histogram,
        )
    }
}

fn max_run<T: PartialEq + Clone>(sorted: &[T]) -> Option<(T, u64)> {
    let mut best: Option<(T, u64)> = None;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if best.as_ref().is_none_or(|b| (j - i) as u64 > b.1) {
            best = Some((sorted[i].clone(), (j - i) as u64));
        }
        i = j;
    }
    best
}
