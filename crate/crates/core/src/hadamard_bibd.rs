//! Hadamard matrices of order `8t+4`, the symmetric designs they carry, and
//! the binary basic arrays obtained from them.
//!
//! ```text
//! hadamard(8t+4) → symmetric (8t+3, 4t+1, 2t) design
//!                → derived + complemented (4t+1, 2t+1, 2t+1) design, b = 8t+2
//!                → basic OA_{2t+1}(4t+1, 2) with two all-zero rows
//! ```

use std::collections::HashMap;

use crate::bounds::is_prime;
use crate::designs::{BlockDesign, HadamardMatrix, OrthogonalArray};
use crate::error::{Error, Result};
use crate::verifier::{repeated_row, verify_strength2};

/// How a Hadamard matrix of a given order is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// The 1×1 matrix `(+)`.
    Unit,
    /// `[[H, H], [H, −H]]`.
    Doubling(Box<Construction>),
    /// Quadratic-residue construction of order `q+1`, `q ≡ 3 mod 4` prime.
    PaleyI { q: usize },
    /// Quadratic-residue construction of order `2(q+1)`, `q ≡ 1 mod 4` prime.
    PaleyII { q: usize },
    /// `H₁ ⊗ H₂`.
    Kronecker(Box<Construction>, Box<Construction>),
}

impl Construction {
    pub fn order(&self) -> usize {
        match self {
            Construction::Unit => 1,
            Construction::Doubling(inner) => 2 * inner.order(),
            Construction::PaleyI { q } => q + 1,
            Construction::PaleyII { q } => 2 * (q + 1),
            Construction::Kronecker(a, b) => a.order() * b.order(),
        }
    }
}

/// Finds a construction for `order`, preferring Sylvester, then Paley I,
/// Paley II, doubling and finally Kronecker products.
pub fn plan(order: usize) -> Option<Construction> {
    plan_memo(order, &mut HashMap::new())
}

fn plan_memo(
    order: usize,
    memo: &mut HashMap<usize, Option<Construction>>,
) -> Option<Construction> {
    if let Some(c) = memo.get(&order) {
        return c.clone();
    }
    let found = if order == 0 {
        None
    } else if order == 1 {
        Some(Construction::Unit)
    } else if order == 2 {
        Some(Construction::Doubling(Box::new(Construction::Unit)))
    } else if !order.is_multiple_of(4) {
        None
    } else if order.is_power_of_two() {
        plan_memo(order / 2, memo).map(|c| Construction::Doubling(Box::new(c)))
    } else if is_prime(order as u64 - 1) && (order - 1) % 4 == 3 {
        Some(Construction::PaleyI { q: order - 1 })
    } else if order.is_multiple_of(2)
        && order / 2 >= 2
        && is_prime((order / 2 - 1) as u64)
        && (order / 2 - 1) % 4 == 1
    {
        Some(Construction::PaleyII { q: order / 2 - 1 })
    } else if let Some(half) = plan_memo(order / 2, memo) {
        Some(Construction::Doubling(Box::new(half)))
    } else {
        let mut product = None;
        let mut a = 4;
        while a * a <= order {
            if order.is_multiple_of(a) {
                if let (Some(x), Some(y)) = (plan_memo(a, memo), plan_memo(order / a, memo)) {
                    product = Some(Construction::Kronecker(Box::new(x), Box::new(y)));
                    break;
                }
            }
            a += 4;
        }
        product
    };
    memo.insert(order, found.clone());
    found
}

/// A Hadamard matrix of the given order.
///
/// Orders `≡ 2 mod 4` above 2 do not exist; others the implemented methods
/// cannot reach (92 is the smallest) are reported as [`Error::Unreachable`].
pub fn hadamard(order: usize) -> Result<HadamardMatrix> {
    let c = plan(order).ok_or(Error::Unreachable { order })?;
    HadamardMatrix::new(order, build(&c))
}

fn build(c: &Construction) -> Vec<i8> {
    match c {
        Construction::Unit => vec![1],
        Construction::Doubling(inner) => {
            let h = build(inner);
            let n = inner.order();
            let mut out = vec![0i8; 4 * n * n];
            for i in 0..n {
                for j in 0..n {
                    let x = h[i * n + j];
                    out[i * 2 * n + j] = x;
                    out[i * 2 * n + j + n] = x;
                    out[(i + n) * 2 * n + j] = x;
                    out[(i + n) * 2 * n + j + n] = -x;
                }
            }
            out
        }
        Construction::PaleyI { q } => paley_one(*q),
        Construction::PaleyII { q } => paley_two(*q),
        Construction::Kronecker(a, b) => {
            let (ha, hb) = (build(a), build(b));
            let (na, nb) = (a.order(), b.order());
            let n = na * nb;
            let mut out = vec![0i8; n * n];
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = ha[(i / nb) * na + j / nb] * hb[(i % nb) * nb + j % nb];
                }
            }
            out
        }
    }
}

/// Quadratic character on `Z_q`, by squaring every element.
fn quadratic_character(q: usize) -> Vec<i8> {
    let mut chi = vec![-1i8; q];
    chi[0] = 0;
    for x in 1..q {
        chi[x * x % q] = 1;
    }
    chi
}

/// `(q+1) × (q+1)` matrix `[[0, 1ᵀ], [±1, Q]]` with `Q[i][j] = χ(j − i)`;
/// the rest of the first column is `column_sign`.
fn conference_core(q: usize, column_sign: i8) -> Vec<i8> {
    let chi = quadratic_character(q);
    let n = q + 1;
    let mut c = vec![0i8; n * n];
    for j in 1..n {
        c[j] = 1;
        c[j * n] = column_sign;
    }
    for i in 0..q {
        for j in 0..q {
            c[(i + 1) * n + j + 1] = chi[(j + q - i) % q];
        }
    }
    c
}

fn paley_one(q: usize) -> Vec<i8> {
    let n = q + 1;
    let mut h = conference_core(q, -1);
    for i in 0..n {
        h[i * n + i] = 1;
    }
    h
}

fn paley_two(q: usize) -> Vec<i8> {
    let c = conference_core(q, 1);
    let m = q + 1;
    let n = 2 * m;
    let mut h = vec![0i8; n * n];
    for i in 0..m {
        for j in 0..m {
            let block: [[i8; 2]; 2] = match c[i * m + j] {
                0 => [[1, -1], [-1, -1]],
                s => [[s, s], [s, -s]],
            };
            for (a, row) in block.iter().enumerate() {
                for (b, &x) in row.iter().enumerate() {
                    h[(2 * i + a) * n + 2 * j + b] = x;
                }
            }
        }
    }
    h
}

fn order_parameter(order: usize) -> Result<usize> {
    if order < 12 || order % 8 != 4 {
        return Err(Error::domain(format!(
            "order {order} is not 8t+4 with t >= 1"
        )));
    }
    Ok((order - 4) / 8)
}

/// Normalizes `h`, deletes its first row and column and maps `+1 ↦ 1`,
/// `−1 ↦ 0`: a symmetric `(8t+3, 4t+1, 2t)` design.
pub fn hadamard_to_symmetric_bibd(h: &HadamardMatrix) -> Result<BlockDesign> {
    let t = order_parameter(h.order())?;
    let norm = h.normalized();
    let blocks = norm
        .rows()
        .skip(1)
        .map(|row| row[1..].iter().map(|&x| (x == 1) as u8).collect())
        .collect();
    let v = 8 * t + 3;
    BlockDesign::new(v, v, 4 * t + 1, 4 * t + 1, 2 * t, blocks)
}

fn symmetric_parameter(d: &BlockDesign) -> Result<usize> {
    let (v, b, r, k, lambda) = d.parameters();
    let t = lambda / 2;
    if t == 0 || (v, b, r, k, lambda) != (8 * t + 3, 8 * t + 3, 4 * t + 1, 4 * t + 1, 2 * t) {
        return Err(Error::domain(format!(
            "expected a symmetric (8t+3, 4t+1, 2t) design, got (v, b, r, k, λ) = {:?}",
            (v, b, r, k, lambda)
        )));
    }
    Ok(t)
}

/// Restricts every other block to block `block_index`, then complements each
/// restricted block within it: a `(4t+1, 2t+1, 2t+1)` design with `8t+2` blocks.
pub fn derived_then_complement(d: &BlockDesign, block_index: usize) -> Result<BlockDesign> {
    let t = symmetric_parameter(d)?;
    if block_index >= d.b() {
        return Err(Error::domain(format!(
            "block index {block_index} out of range for {} blocks",
            d.b()
        )));
    }
    let points: Vec<usize> = d
        .block(block_index)
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 1)
        .map(|(p, _)| p)
        .collect();
    let blocks = d
        .blocks()
        .enumerate()
        .filter(|&(i, _)| i != block_index)
        .map(|(_, block)| points.iter().map(|&p| 1 - block[p]).collect())
        .collect();
    BlockDesign::new(
        4 * t + 1,
        8 * t + 2,
        4 * t + 2,
        2 * t + 1,
        2 * t + 1,
        blocks,
    )
}

fn derived_parameter(d: &BlockDesign) -> Result<usize> {
    let (v, b, r, k, lambda) = d.parameters();
    let t = v.saturating_sub(1) / 4;
    if t == 0 || (v, b, r, k, lambda) != (4 * t + 1, 8 * t + 2, 4 * t + 2, 2 * t + 1, 2 * t + 1) {
        return Err(Error::domain(format!(
            "expected a (4t+1, 2t+1, 2t+1) design with 8t+2 blocks, got (v, b, r, k, λ) = {:?}",
            (v, b, r, k, lambda)
        )));
    }
    Ok(t)
}

/// Two all-zero rows over the incidence matrix: a basic `OA_{2t+1}(4t+1, 2)`.
pub fn bibd_to_oa(d: &BlockDesign) -> Result<OrthogonalArray> {
    let t = derived_parameter(d)?;
    let v = d.v();
    let mut data = vec![0u8; 2 * v];
    for block in d.blocks() {
        data.extend_from_slice(block);
    }
    let a = OrthogonalArray::from_flat(v, 2, 2 * t as u64 + 1, data)?;
    let report = verify_strength2(&a);
    if !report.is_oa {
        let witness = report.offending.map(|w| w.to_string()).unwrap_or_default();
        return Err(Error::Verification(witness));
    }
    Ok(a)
}

/// Drops the two all-zero rows of a basic `OA_{2t+1}(4t+1, 2)`; the
/// remaining rows are the blocks of a `(4t+1, 2t+1, 2t+1)` design.
pub fn oa_to_bibd(a: &OrthogonalArray) -> Result<BlockDesign> {
    let k = a.k();
    let t = (k - 1) / 4;
    if a.n() != 2 || t == 0 || k != 4 * t + 1 || a.lambda() != 2 * t as u64 + 1 {
        return Err(Error::domain(format!(
            "expected OA_(2t+1)(4t+1, 2), got lambda = {}, k = {k}, n = {}",
            a.lambda(),
            a.n()
        )));
    }
    let (row, m) = repeated_row(a);
    if row.iter().any(|&s| s != 0) {
        return Err(Error::domain("the repeated row is not all-zero"));
    }
    if m != 2 {
        return Err(Error::domain(format!(
            "repeated row occurs {m} times, expected 2"
        )));
    }
    let blocks = a
        .rows()
        .filter(|r| r.iter().any(|&s| s != 0))
        .map(<[u8]>::to_vec)
        .collect();
    BlockDesign::new(k, 8 * t + 2, 4 * t + 2, 2 * t + 1, 2 * t + 1, blocks)
}

/// `hadamard(8t+4)` through to the basic `OA_{2t+1}(4t+1, 2)`, deriving at
/// `block_index`.
pub fn basic_binary_oa(t: usize, block_index: usize) -> Result<OrthogonalArray> {
    if t == 0 {
        return Err(Error::domain("t must be at least 1"));
    }
    let h = hadamard(8 * t + 4)?;
    let sym = hadamard_to_symmetric_bibd(&h)?;
    let derived = derived_then_complement(&sym, block_index)?;
    bibd_to_oa(&derived)
}
