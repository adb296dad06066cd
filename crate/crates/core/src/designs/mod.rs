//! Core combinatorial objects shared by every construction and check.
//!
//! All types validate their structural invariants on construction and are
//! immutable afterwards. The strength-2 property of an [`OrthogonalArray`] is
//! deliberately *not* checked here; that is the verifier's job.

mod io;

pub use io::{
    parse_bibd, parse_hadamard, parse_oa, read_bibd, read_hadamard, read_oa, read_oa_rows,
    write_bibd, write_hadamard, write_oa, write_oa_header, write_oa_row, OaHeader, OaRows,
};

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational used for every bound and derived parameter.
pub type Rational = Ratio<i128>;

/// Largest supported alphabet. Symbols are stored as `u8` and the value
/// [`INFINITY`] is reserved for the point at infinity of starting rows.
pub const MAX_ALPHABET: usize = 255;

/// Sentinel for the fixed point ∞ in the `{∞} ∪ Z_{n−1}` alphabet.
pub const INFINITY: u8 = u8::MAX;

/// A `λn² × k` array over the symbols `0..n`.
///
/// Rows are stored flat in construction order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrthogonalArray {
    k: usize,
    n: usize,
    lambda: u64,
    data: Vec<u8>,
}

pub(crate) fn check_dimensions(k: usize, n: usize, lambda: u64) -> Result<u128> {
    if k < 2 {
        return Err(Error::domain(format!(
            "column count k = {k} must be at least 2"
        )));
    }
    if !(2..=MAX_ALPHABET).contains(&n) {
        return Err(Error::domain(format!(
            "alphabet size n = {n} must lie in 2..={MAX_ALPHABET}"
        )));
    }
    if lambda < 1 {
        return Err(Error::domain("index lambda must be at least 1"));
    }
    Ok(lambda as u128 * (n as u128) * (n as u128))
}

impl OrthogonalArray {
    pub fn new(k: usize, n: usize, lambda: u64, rows: Vec<Vec<u8>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::domain(format!(
                    "row {i} has length {} but k = {k}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(k, n, lambda, data)
    }

    /// Builds an array from row-major data of length `λn²·k`.
    pub fn from_flat(k: usize, n: usize, lambda: u64, data: Vec<u8>) -> Result<Self> {
        let expected = check_dimensions(k, n, lambda)?;
        if !data.len().is_multiple_of(k) {
            return Err(Error::domain(format!(
                "data length {} is not a multiple of k = {k}",
                data.len()
            )));
        }
        let rows = (data.len() / k) as u128;
        if rows != expected {
            return Err(Error::domain(format!(
                "row count {rows} differs from lambda*n^2 = {expected}"
            )));
        }
        if let Some(pos) = data.iter().position(|&s| s as usize >= n) {
            return Err(Error::domain(format!(
                "symbol {} in row {} column {} is outside 0..{n}",
                data[pos],
                pos / k,
                pos % k
            )));
        }
        Ok(Self { k, n, lambda, data })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn num_rows(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.k)
    }

    pub fn as_flat(&self) -> &[u8] {
        &self.data
    }

    /// `copies` copies of every row, stacked; an array with index `copies·λ`.
    pub fn stacked(&self, copies: u64) -> Result<Self> {
        if copies == 0 {
            return Err(Error::domain("stacking needs at least one copy"));
        }
        let mut data = Vec::with_capacity(self.data.len() * copies as usize);
        for _ in 0..copies {
            data.extend_from_slice(&self.data);
        }
        Self::from_flat(self.k, self.n, self.lambda * copies, data)
    }

    /// The array restricted to `columns`, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.k) {
            return Err(Error::domain(format!(
                "column {c} out of range for k = {}",
                self.k
            )));
        }
        let mut data = Vec::with_capacity(self.num_rows() * columns.len());
        for row in self.rows() {
            data.extend(columns.iter().map(|&c| row[c]));
        }
        Self::from_flat(columns.len(), self.n, self.lambda, data)
    }

    /// Same rows, reordered by `order` (a permutation of row indices).
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.num_rows() {
            return Err(Error::domain("row permutation has the wrong length"));
        }
        let mut seen = vec![false; order.len()];
        let mut data = Vec::with_capacity(self.data.len());
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::domain("row order is not a permutation"));
            }
            data.extend_from_slice(self.row(i));
        }
        Self::from_flat(self.k, self.n, self.lambda, data)
    }

    /// Rows sorted lexicographically; the canonical form for multiset comparison.
    pub fn sorted_rows(&self) -> Vec<&[u8]> {
        let mut rows: Vec<&[u8]> = self.rows().collect();
        rows.sort_unstable();
        rows
    }
}

impl fmt::Debug for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrthogonalArray {{ k: {}, n: {}, lambda: {}, rows: {} }}",
            self.k,
            self.n,
            self.lambda,
            self.num_rows()
        )
    }
}

impl fmt::Display for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        write_oa(self, &mut buf).map_err(|_| fmt::Error)?;
        f.write_str(std::str::from_utf8(&buf).map_err(|_| fmt::Error)?)
    }
}

/// `(m, λ, k, n)`: repeat multiplicity, index, columns, alphabet size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadruple {
    pub m: u64,
    pub lambda: u64,
    pub k: u64,
    pub n: u64,
}

impl Quadruple {
    pub fn new(m: u64, lambda: u64, k: u64, n: u64) -> Self {
        Self { m, lambda, k, n }
    }

    /// Forced number of zeros per non-repeated row, `(k−1)/n`.
    pub fn abar(&self) -> Rational {
        Rational::new(self.k as i128 - 1, self.n as i128)
    }

    /// `n²/(k(n−1)+1)`, the optimal ratio `m/λ`.
    pub fn rho(&self) -> Rational {
        Rational::new(
            (self.n * self.n) as i128,
            (self.k * (self.n - 1) + 1) as i128,
        )
    }

    pub fn is_feasible(&self) -> bool {
        if self.k < 2 || self.n < 2 || self.m < 1 || self.lambda < 1 {
            return false;
        }
        let denom = self.k as u128 * (self.n as u128 - 1) + 1;
        let abar = self.abar();
        self.m as u128 * denom == self.lambda as u128 * (self.n as u128).pow(2)
            && abar.is_integer()
            && *abar.numer() >= 1
    }

    pub fn is_basic(&self) -> bool {
        self.is_feasible() && self.m.gcd(&self.lambda) == 1
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.m, self.lambda, self.k, self.n)
    }
}

/// How base rows are expanded into array rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Development {
    /// Every rotation is also shifted by each `c ∈ Z_{n−1}` (∞ fixed);
    /// `m` base rows.
    #[default]
    Modular,
    /// Rotations only; `m(n−1)` base rows.
    Rotation,
}

impl Development {
    /// Number of shifts applied to each rotation.
    pub fn shifts(self, n: usize) -> usize {
        match self {
            Development::Modular => n - 1,
            Development::Rotation => 1,
        }
    }

    /// Number of base rows for `m` adjoined constant rows.
    pub fn base_row_count(self, n: usize, m: usize) -> usize {
        match self {
            Development::Modular => m,
            Development::Rotation => m * (n - 1),
        }
    }
}

/// Generator rows over `{∞} ∪ Z_{n−1}` for cyclic development.
///
/// Symbols are `0..n−1` for `Z_{n−1}` and [`INFINITY`] for ∞. With
/// [`Development::Modular`] there is one base row per adjoined constant row;
/// with [`Development::Rotation`] there are `m(n−1)`. For `n = 2` the two
/// rules coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StartingRowSet {
    k: usize,
    n: usize,
    m: usize,
    development: Development,
    base_rows: Vec<Vec<u8>>,
}

impl StartingRowSet {
    pub fn new(k: usize, n: usize, m: usize, base_rows: Vec<Vec<u8>>) -> Result<Self> {
        Self::with_development(k, n, m, Development::Modular, base_rows)
    }

    pub fn with_development(
        k: usize,
        n: usize,
        m: usize,
        development: Development,
        base_rows: Vec<Vec<u8>>,
    ) -> Result<Self> {
        check_dimensions(k, n, 1)?;
        if m == 0 {
            return Err(Error::domain("starting-row set needs m >= 1"));
        }
        let expected = development.base_row_count(n, m);
        if base_rows.len() != expected {
            return Err(Error::domain(format!(
                "expected {expected} base rows, got {}",
                base_rows.len()
            )));
        }
        for (i, row) in base_rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::domain(format!(
                    "base row {i} has length {} but k = {k}",
                    row.len()
                )));
            }
            if let Some(&s) = row.iter().find(|&&s| s != INFINITY && s as usize >= n - 1) {
                return Err(Error::domain(format!(
                    "base row {i} has symbol {s} outside Z_{}",
                    n - 1
                )));
            }
        }
        Ok(Self {
            k,
            n,
            m,
            development,
            base_rows,
        })
    }

    /// Base rows given in the final alphabet `0..n`, where `0` stands for ∞
    /// and `z ≥ 1` for `z−1 ∈ Z_{n−1}`. For `n = 2` this is the 0/1 notation
    /// used for plain rotation.
    pub fn from_final_symbols(
        k: usize,
        n: usize,
        m: usize,
        development: Development,
        rows: &[Vec<u8>],
    ) -> Result<Self> {
        let mut base = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for &s in row {
                if s as usize >= n {
                    return Err(Error::domain(format!(
                        "base row {i} has symbol {s} outside 0..{n}"
                    )));
                }
                out.push(to_internal(s));
            }
            base.push(out);
        }
        Self::with_development(k, n, m, development, base)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn development(&self) -> Development {
        self.development
    }

    pub fn base_rows(&self) -> &[Vec<u8>] {
        &self.base_rows
    }
}

/// ∞ ↦ 0, z ↦ z+1.
#[inline]
pub fn to_final(symbol: u8) -> u8 {
    if symbol == INFINITY {
        0
    } else {
        symbol + 1
    }
}

/// 0 ↦ ∞, z ↦ z−1.
#[inline]
pub fn to_internal(symbol: u8) -> u8 {
    if symbol == 0 {
        INFINITY
    } else {
        symbol - 1
    }
}

/// A 2-design given by its `b × v` incidence matrix (rows are blocks).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDesign {
    v: usize,
    b: usize,
    r: usize,
    k_block: usize,
    lambda_d: usize,
    incidence: Vec<u8>,
}

impl BlockDesign {
    /// Infers `(b, r, k, λ)` from the incidence rows and checks every BIBD
    /// invariant.
    pub fn from_incidence(v: usize, blocks: Vec<Vec<u8>>) -> Result<Self> {
        if v < 2 {
            return Err(Error::domain("a block design needs at least 2 points"));
        }
        if blocks.is_empty() {
            return Err(Error::domain("a block design needs at least one block"));
        }
        let b = blocks.len();
        let mut incidence = Vec::with_capacity(b * v);
        for (i, block) in blocks.iter().enumerate() {
            if block.len() != v {
                return Err(Error::domain(format!(
                    "block {i} has {} entries but v = {v}",
                    block.len()
                )));
            }
            if block.iter().any(|&x| x > 1) {
                return Err(Error::domain(format!("block {i} has a non 0/1 entry")));
            }
            incidence.extend_from_slice(block);
        }

        let k_block = blocks[0].iter().filter(|&&x| x == 1).count();
        for (i, block) in blocks.iter().enumerate() {
            let size = block.iter().filter(|&&x| x == 1).count();
            if size != k_block {
                return Err(Error::domain(format!(
                    "block {i} has size {size}, block 0 has size {k_block}"
                )));
            }
        }

        let mut replication = vec![0usize; v];
        let mut pairs = vec![0usize; v * v];
        let mut points = Vec::with_capacity(k_block);
        for block in &blocks {
            points.clear();
            points.extend(
                block
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == 1)
                    .map(|(p, _)| p),
            );
            for (a, &x) in points.iter().enumerate() {
                replication[x] += 1;
                for &y in &points[a + 1..] {
                    pairs[x * v + y] += 1;
                }
            }
        }
        let r = replication[0];
        if let Some(p) = replication.iter().position(|&c| c != r) {
            return Err(Error::domain(format!(
                "point {p} lies in {} blocks, point 0 in {r}",
                replication[p]
            )));
        }
        let lambda_d = pairs[1];
        for x in 0..v {
            for y in x + 1..v {
                if pairs[x * v + y] != lambda_d {
                    return Err(Error::domain(format!(
                        "points {x},{y} lie together in {} blocks, points 0,1 in {lambda_d}",
                        pairs[x * v + y]
                    )));
                }
            }
        }
        if b * k_block != v * r || lambda_d * (v - 1) != r * (k_block.saturating_sub(1)) {
            return Err(Error::domain(
                "counting identities bk = vr, λ(v−1) = r(k−1) fail",
            ));
        }
        Ok(Self {
            v,
            b,
            r,
            k_block,
            lambda_d,
            incidence,
        })
    }

    /// Like [`BlockDesign::from_incidence`] but also requires the given parameters.
    pub fn new(
        v: usize,
        b: usize,
        r: usize,
        k_block: usize,
        lambda_d: usize,
        blocks: Vec<Vec<u8>>,
    ) -> Result<Self> {
        let design = Self::from_incidence(v, blocks)?;
        let got = design.parameters();
        if got != (v, b, r, k_block, lambda_d) {
            return Err(Error::domain(format!(
                "declared parameters {:?} differ from actual {:?}",
                (v, b, r, k_block, lambda_d),
                got
            )));
        }
        Ok(design)
    }

    /// `(v, b, r, k, λ)`.
    pub fn parameters(&self) -> (usize, usize, usize, usize, usize) {
        (self.v, self.b, self.r, self.k_block, self.lambda_d)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k_block(&self) -> usize {
        self.k_block
    }

    pub fn lambda_d(&self) -> usize {
        self.lambda_d
    }

    pub fn is_symmetric(&self) -> bool {
        self.v == self.b
    }

    pub fn block(&self, i: usize) -> &[u8] {
        &self.incidence[i * self.v..(i + 1) * self.v]
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.incidence.chunks_exact(self.v)
    }
}

/// A square ±1 matrix with pairwise orthogonal rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn new(order: usize, entries: Vec<i8>) -> Result<Self> {
        if order == 0 || entries.len() != order * order {
            return Err(Error::domain(format!(
                "expected {order}x{order} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::domain("Hadamard entries must be +1 or -1"));
        }
        let h = Self { order, entries };
        if let Some((i, j)) = h.first_non_orthogonal_pair() {
            return Err(Error::domain(format!(
                "rows {i} and {j} are not orthogonal"
            )));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(order: usize, entries: Vec<i8>) -> Self {
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[i8]> + '_ {
        self.entries.chunks_exact(self.order)
    }

    /// Exact check of `H·Hᵀ = order·I`; returns the first failing row pair.
    pub fn first_non_orthogonal_pair(&self) -> Option<(usize, usize)> {
        let n = self.order;
        for i in 0..n {
            for j in i..n {
                let dot: i64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(&a, &b)| (a as i64) * (b as i64))
                    .sum();
                let want = if i == j { n as i64 } else { 0 };
                if dot != want {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Negates columns so row 0 is all `+1`, then rows so column 0 is all `+1`.
    pub fn normalized(&self) -> Self {
        let n = self.order;
        let mut e = self.entries.clone();
        for j in 0..n {
            if e[j] == -1 {
                for i in 0..n {
                    e[i * n + j] = -e[i * n + j];
                }
            }
        }
        for i in 0..n {
            if e[i * n] == -1 {
                for x in &mut e[i * n..(i + 1) * n] {
                    *x = -*x;
                }
            }
        }
        Self::new_unchecked(n, e)
    }
}
