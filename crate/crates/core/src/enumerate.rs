//! Optimal arrays from all `k`-tuples with exactly `ā` zeros, and their
//! balanced partitions.
//!
//! Every tuple over `0..n` with exactly `ā = (k−1)/n` zeros, together with
//! `m` all-zero rows, forms an optimal `OA_λ(k, n)` with
//! `λ = C(k−2, ā−1)·(n−1)^{k−ā−1}`. Reading zero as ∞ and `z ≥ 1` as
//! `z−1 ∈ Z_{n−1}`, the tuples split by the sum of their finite entries into
//! `n−1` classes, each again optimal once `m/(n−1)` constant rows are added.
//! Splitting the columns into `γ` classes and taking one sum per class refines
//! this to `(n−1)^γ` parts.
//!
//! Rows are produced in a fixed order: the all-zero rows, then tuples ordered
//! by zero positions (lexicographic subsets) and then by the nonzero entries
//! (lexicographic).

use crate::bounds::{abar, binomial, checked_pow, rao_denominator};
use crate::designs::{check_dimensions, OrthogonalArray, INFINITY};
use crate::error::{Error, Result};

/// Arrays with more rows than this are not materialized by default.
pub const DEFAULT_THRESHOLD: u128 = 1 << 24;

/// Sizes for the full enumeration at `(k, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub k: usize,
    pub n: usize,
    pub abar: usize,
    pub lambda: u64,
    /// All-zero rows.
    pub m: u64,
    /// Tuples with exactly `ā` zeros, `C(k, ā)·(n−1)^{k−ā}`.
    pub tuples: u64,
    /// Tuples with zeros in two given columns, `C(k−2, ā−2)·(n−1)^{k−ā}`.
    pub zero_pairs: u64,
}

impl Enumeration {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        check_dimensions(k, n, 1)?;
        let (ku, nu) = (k as u64, n as u64);
        let a = abar(ku, nu).ok_or_else(|| {
            Error::infeasible(format!("(k-1)/n = ({k}-1)/{n} is not a positive integer"))
        })?;
        let denom = rao_denominator(ku, nu);
        if nu * nu > denom {
            return Err(Error::infeasible(format!(
                "n^2 = {} exceeds k(n-1)+1 = {denom}",
                nu * nu
            )));
        }
        let lambda = binomial(ku - 2, a - 1)?
            .checked_mul(checked_pow(nu - 1, ku - a - 1)?)
            .ok_or(Error::Overflow("lambda"))?;
        let rows = lambda as u128 * (nu * nu) as u128;
        if !rows.is_multiple_of(denom as u128) {
            return Err(Error::Verification(format!(
                "lambda*n^2 = {rows} is not divisible by k(n-1)+1 = {denom}"
            )));
        }
        let tuples = binomial(ku, a)?
            .checked_mul(checked_pow(nu - 1, ku - a)?)
            .ok_or(Error::Overflow("tuple count"))?;
        let zero_pairs = if a >= 2 {
            binomial(ku - 2, a - 2)?
                .checked_mul(checked_pow(nu - 1, ku - a)?)
                .ok_or(Error::Overflow("zero pair count"))?
        } else {
            0
        };
        Ok(Self {
            k,
            n,
            abar: a as usize,
            lambda,
            m: (rows / denom as u128) as u64,
            tuples,
            zero_pairs,
        })
    }

    pub fn rows(&self) -> u128 {
        self.lambda as u128 * (self.n * self.n) as u128
    }
}

/// Calls `sink` on every tuple over `0..n` with exactly `ā` zeros.
pub fn visit_tuples<F: FnMut(&[u8])>(e: &Enumeration, mut sink: F) {
    let (k, n, a) = (e.k, e.n as u8, e.abar);
    let mut zeros: Vec<usize> = (0..a).collect();
    let mut row = vec![0u8; k];
    let mut free = Vec::with_capacity(k - a);
    loop {
        free.clear();
        let mut zi = 0;
        for (j, cell) in row.iter_mut().enumerate() {
            if zi < a && zeros[zi] == j {
                *cell = 0;
                zi += 1;
            } else {
                *cell = 1;
                free.push(j);
            }
        }
        loop {
            sink(&row);
            // odometer over the free positions, last position fastest
            let mut exhausted = true;
            for &j in free.iter().rev() {
                if row[j] + 1 < n {
                    row[j] += 1;
                    exhausted = false;
                    break;
                }
                row[j] = 1;
            }
            if exhausted {
                break;
            }
        }
        // next zero-position subset
        let mut i = a;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if zeros[i] < k - a + i {
                zeros[i] += 1;
                for t in i + 1..a {
                    zeros[t] = zeros[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Calls `sink` on every row: `m` zero rows, then the tuples.
pub fn visit_rows<F: FnMut(&[u8])>(e: &Enumeration, mut sink: F) {
    let zero = vec![0u8; e.k];
    for _ in 0..e.m {
        sink(&zero);
    }
    visit_tuples(e, sink);
}

fn check_size(rows: u128, threshold: u128) -> Result<()> {
    if rows > threshold {
        return Err(Error::TooLarge { rows, threshold });
    }
    Ok(())
}

/// The full optimal array at `(k, n)`, if it has at most [`DEFAULT_THRESHOLD`] rows.
pub fn enumerate_oa(k: usize, n: usize) -> Result<OrthogonalArray> {
    enumerate_oa_with_threshold(k, n, DEFAULT_THRESHOLD)
}

pub fn enumerate_oa_with_threshold(k: usize, n: usize, threshold: u128) -> Result<OrthogonalArray> {
    let e = Enumeration::new(k, n)?;
    check_size(e.rows(), threshold)?;
    let mut data = Vec::with_capacity(e.rows() as usize * k);
    visit_rows(&e, |row| data.extend_from_slice(row));
    OrthogonalArray::from_flat(k, n, e.lambda, data)
}

/// Column classes for the refined partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    enumeration: Enumeration,
    class_sizes: Vec<usize>,
}

impl PartitionSpec {
    /// A single class spanning all columns: the split by total sum.
    pub fn single(k: usize, n: usize) -> Result<Self> {
        Ok(Self {
            enumeration: Enumeration::new(k, n)?,
            class_sizes: vec![k],
        })
    }

    /// `class_sizes` defaults to `γ−1` classes of size `ā+3` and one class
    /// taking the remaining columns, with `γ = ⌊k/(ā+3)⌋`.
    pub fn new(k: usize, n: usize, class_sizes: Option<Vec<usize>>) -> Result<Self> {
        let enumeration = Enumeration::new(k, n)?;
        let width = enumeration.abar + 3;
        let class_sizes = match class_sizes {
            Some(sizes) => {
                if sizes.is_empty() {
                    return Err(Error::domain("at least one column class is needed"));
                }
                if let Some(&s) = sizes.iter().find(|&&s| s < width) {
                    return Err(Error::domain(format!(
                        "class size {s} is below abar+3 = {width}"
                    )));
                }
                let total: usize = sizes.iter().sum();
                if total != k {
                    return Err(Error::domain(format!(
                        "class sizes sum to {total}, expected k = {k}"
                    )));
                }
                sizes
            }
            None => {
                let gamma = k / width;
                if gamma == 0 {
                    return Err(Error::domain(format!(
                        "k = {k} < abar+3 = {width}: no column class fits"
                    )));
                }
                let mut sizes = vec![width; gamma - 1];
                sizes.push(k - width * (gamma - 1));
                sizes
            }
        };
        let parts = checked_pow((n - 1) as u64, class_sizes.len() as u64)?;
        if enumeration.m % parts != 0 || enumeration.lambda % parts != 0 {
            return Err(Error::Verification(format!(
                "m = {} or lambda = {} not divisible by {parts} parts",
                enumeration.m, enumeration.lambda
            )));
        }
        Ok(Self {
            enumeration,
            class_sizes,
        })
    }

    pub fn enumeration(&self) -> &Enumeration {
        &self.enumeration
    }

    pub fn gamma(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// `(n−1)^γ`.
    pub fn parts(&self) -> usize {
        (self.enumeration.n - 1).pow(self.gamma() as u32)
    }

    pub fn part_lambda(&self) -> u64 {
        self.enumeration.lambda / self.parts() as u64
    }

    pub fn part_m(&self) -> u64 {
        self.enumeration.m / self.parts() as u64
    }

    /// Per-class sums of finite entries mod `n−1` of a final-alphabet row.
    pub fn type_vector(&self, row: &[u8]) -> Vec<u8> {
        let modulus = (self.enumeration.n - 1) as u32;
        let mut out = Vec::with_capacity(self.gamma());
        let mut start = 0;
        for &size in &self.class_sizes {
            let sum: u32 = row[start..start + size]
                .iter()
                .filter(|&&s| s != 0)
                .map(|&s| s as u32 - 1)
                .sum();
            out.push((sum % modulus) as u8);
            start += size;
        }
        out
    }

    /// Index of the part containing `row`: its type vector read as base-`(n−1)` digits.
    pub fn part_of(&self, row: &[u8]) -> usize {
        let modulus = self.enumeration.n - 1;
        let mut idx = 0;
        let mut start = 0;
        for &size in &self.class_sizes {
            let sum: usize = row[start..start + size]
                .iter()
                .filter(|&&s| s != 0)
                .map(|&s| s as usize - 1)
                .sum();
            idx = idx * modulus + sum % modulus;
            start += size;
        }
        idx
    }

    /// Type vector of part `index`.
    pub fn part_label(&self, index: usize) -> Vec<u8> {
        let modulus = self.enumeration.n - 1;
        let mut out = vec![0u8; self.gamma()];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = (rest % modulus) as u8;
            rest /= modulus;
        }
        out
    }
}

/// Calls `sink(part, row)` for every row of every part: first each part's
/// constant rows, then every tuple tagged with its part.
pub fn visit_parts<F: FnMut(usize, &[u8])>(spec: &PartitionSpec, mut sink: F) {
    let e = spec.enumeration();
    let zero = vec![0u8; e.k];
    for part in 0..spec.parts() {
        for _ in 0..spec.part_m() {
            sink(part, &zero);
        }
    }
    visit_tuples(e, |row| sink(spec.part_of(row), row));
}

fn materialize_parts(spec: &PartitionSpec, threshold: u128) -> Result<Vec<OrthogonalArray>> {
    let e = spec.enumeration();
    check_size(e.rows(), threshold)?;
    let per_part = e.rows() as usize / spec.parts() * e.k;
    let mut data: Vec<Vec<u8>> = (0..spec.parts())
        .map(|_| Vec::with_capacity(per_part))
        .collect();
    visit_parts(spec, |part, row| data[part].extend_from_slice(row));
    data.into_iter()
        .map(|d| OrthogonalArray::from_flat(e.k, e.n, spec.part_lambda(), d))
        .collect()
}

/// The `n−1` parts split by total sum, each an optimal `OA_{λ/(n−1)}(k, n)`.
pub fn partition_oa(k: usize, n: usize) -> Result<Vec<OrthogonalArray>> {
    materialize_parts(&PartitionSpec::single(k, n)?, DEFAULT_THRESHOLD)
}

/// The `(n−1)^γ` parts split by per-class sums.
pub fn multi_partition_oa(
    k: usize,
    n: usize,
    class_sizes: Option<Vec<usize>>,
) -> Result<Vec<OrthogonalArray>> {
    materialize_parts(&PartitionSpec::new(k, n, class_sizes)?, DEFAULT_THRESHOLD)
}

/// For each class `i`, adds `kappa[i]` mod `n−1` to the first finite entry of
/// that class past its second column. `row` is over `{∞} ∪ Z_{n−1}`.
///
/// With `kappa` fixed this maps the tuples of type `τ` one-to-one onto those
/// of type `τ + κ`.
pub fn shift_bijection(
    row: &[u8],
    n: usize,
    class_sizes: &[usize],
    kappa: &[u8],
) -> Result<Vec<u8>> {
    if kappa.len() != class_sizes.len() {
        return Err(Error::domain("one shift per column class is needed"));
    }
    if class_sizes.iter().sum::<usize>() != row.len() {
        return Err(Error::domain("class sizes do not cover the row"));
    }
    if n < 2 {
        return Err(Error::domain("alphabet size must be at least 2"));
    }
    let modulus = (n - 1) as u8;
    let mut out = row.to_vec();
    let mut start = 0;
    for (i, (&size, &shift)) in class_sizes.iter().zip(kappa).enumerate() {
        let class = start..start + size;
        let target = class
            .clone()
            .skip(2)
            .find(|&j| out[j] != INFINITY)
            .ok_or_else(|| {
                Error::domain(format!(
                    "class {i} has no finite entry past its second column"
                ))
            })?;
        out[target] = (out[target] + shift % modulus) % modulus;
        start = class.end;
    }
    Ok(out)
}
