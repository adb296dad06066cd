#![allow(dead_code)]

use std::collections::HashMap;

use oarray::cyclic::develop;
use oarray::{Development, OrthogonalArray, StartingRowSet, INFINITY};

pub const SMALL_OA: &str = "OA 5 2 3\n0 0 0 0 0\n0 0 0 0 0\n0 0 1 1 1\n1 0 0 1 1\n1 1 0 0 1\n\
    1 1 1 0 0\n0 1 1 1 0\n0 1 0 1 1\n1 0 1 0 1\n1 1 0 1 0\n0 1 1 0 1\n1 0 1 1 0\n";

pub fn bits(s: &str) -> Vec<u8> {
    s.bytes()
        .filter(|b| !b.is_ascii_whitespace())
        .map(|b| b - b'0')
        .collect()
}

/// Starting rows over the final alphabet with `(k, n, m, λ)`.
pub struct Entry {
    pub name: &'static str,
    pub set: StartingRowSet,
    pub lambda: u64,
}

fn binary(name: &'static str, k: usize, lambda: u64, rows: [&str; 2]) -> Entry {
    let rows: Vec<Vec<u8>> = rows.iter().map(|r| bits(r)).collect();
    Entry {
        name,
        set: StartingRowSet::from_final_symbols(k, 2, 2, Development::Modular, &rows).unwrap(),
        lambda,
    }
}

fn with_infinity(k: usize, n: usize, m: usize, rows: &[&str]) -> StartingRowSet {
    let rows = rows
        .iter()
        .map(|r| {
            r.split_whitespace()
                .map(|t| {
                    if t == "*" {
                        INFINITY
                    } else {
                        t.parse().unwrap()
                    }
                })
                .collect()
        })
        .collect();
    StartingRowSet::new(k, n, m, rows).unwrap()
}

pub fn modular_5_2() -> Entry {
    binary("OA_3(5,2)", 5, 3, ["00111", "01011"])
}

pub fn binary_examples() -> Vec<Entry> {
    vec![
        binary("OA_5(9,2)", 9, 5, ["000101111", "001101011"]),
        binary("OA_7(13,2)", 13, 7, ["0000101110111", "0010110011101"]),
        binary(
            "OA_9(17,2)",
            17,
            9,
            ["00000101110110111", "00010110101100111"],
        ),
    ]
}

pub fn modular_7_3() -> Entry {
    Entry {
        name: "OA_5(7,3)",
        set: with_infinity(
            7,
            3,
            3,
            &["* * 0 0 0 0 1", "* 1 * 0 1 1 0", "* 1 1 * 1 0 1"],
        ),
        lambda: 5,
    }
}

pub fn modular_9_4() -> Entry {
    Entry {
        name: "OA_7(9,4)",
        set: with_infinity(
            9,
            4,
            4,
            &[
                "* * 0 0 0 0 1 0 2",
                "* 0 * 1 0 0 1 2 1",
                "* 0 1 * 1 1 0 1 2",
                "* 0 0 2 * 2 1 1 2",
            ],
        ),
        lambda: 7,
    }
}

/// A plain-rotation basic OA_5(7,3): six base rows, three zero rows.
pub fn rotation_7_3() -> Entry {
    let rows: Vec<Vec<u8>> = [
        "0011111", "0012122", "0102221", "0120212", "0122102", "0211022",
    ]
    .iter()
    .map(|r| bits(r))
    .collect();
    Entry {
        name: "OA_5(7,3) rotation",
        set: StartingRowSet::from_final_symbols(7, 3, 3, Development::Rotation, &rows).unwrap(),
        lambda: 5,
    }
}

/// Every array in the corpus that is an OA.
pub fn corpus() -> Vec<OrthogonalArray> {
    let mut out = vec![oarray::designs::parse_oa(SMALL_OA).unwrap()];
    for e in binary_examples()
        .into_iter()
        .chain([modular_9_4(), rotation_7_3()])
    {
        out.push(develop(&e.set).unwrap());
    }
    out
}

/// Independent recount: is every ordered pair in every column pair seen
/// exactly λ times, and how often does the most frequent row occur.
pub struct Recount {
    pub is_oa: bool,
    pub m: u64,
}

pub fn recount(a: &OrthogonalArray) -> Recount {
    let (k, n) = (a.k(), a.n());
    let mut is_oa = true;
    for i in 0..k {
        for j in i + 1..k {
            let mut seen: HashMap<(u8, u8), u64> = HashMap::new();
            for row in a.rows() {
                *seen.entry((row[i], row[j])).or_default() += 1;
            }
            for x in 0..n as u8 {
                for y in 0..n as u8 {
                    if seen.get(&(x, y)).copied().unwrap_or(0) != a.lambda() {
                        is_oa = false;
                    }
                }
            }
        }
    }
    let mut rows: HashMap<&[u8], u64> = HashMap::new();
    for row in a.rows() {
        *rows.entry(row).or_default() += 1;
    }
    Recount {
        is_oa,
        m: rows.values().copied().max().unwrap_or(0),
    }
}
