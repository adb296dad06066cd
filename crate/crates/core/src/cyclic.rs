//! Cyclic development of starting rows.
//!
//! A [`StartingRowSet`] over `{∞} ∪ Z_{n−1}` generates an array by rotating
//! every base row through all `k` positions and adjoining `m` all-∞ rows.
//! Under [`Development::Modular`] every rotation is also shifted by each
//! `c ∈ Z_{n−1}` on its finite entries (∞ is fixed). Relabeling ∞ ↦ 0,
//! z ↦ z+1 gives the final array over `0..n`.
//!
//! Whether the result is an OA can be decided from the base rows alone by
//! counting symbol pairs a fixed cyclic distance apart.

use std::io::{BufRead, BufReader, Write};

use crate::bounds;
use crate::designs::{
    to_final, to_internal, Development, OrthogonalArray, Quadruple, StartingRowSet, INFINITY,
};
use crate::error::{Error, Result};

#[inline]
fn shift(symbol: u8, c: u8, modulus: u8) -> u8 {
    if symbol == INFINITY {
        INFINITY
    } else {
        (symbol + c) % modulus
    }
}

/// Develops `s` into an array over `0..n` with the constant rows first.
pub fn develop(s: &StartingRowSet) -> Result<OrthogonalArray> {
    let (k, n, m) = (s.k(), s.n(), s.m());
    let modulus = (n - 1) as u8;
    let shifts = s.development().shifts(n) as u8;
    let total = developed_rows(s);
    if !total.is_multiple_of(n * n) {
        return Err(Error::domain(format!(
            "development gives {total} rows, not a multiple of n^2 = {}",
            n * n
        )));
    }
    let lambda = (total / (n * n)) as u64;
    let mut data = Vec::with_capacity(total * k);
    data.resize(m * k, 0);
    for base in s.base_rows() {
        for r in 0..k {
            for c in 0..shifts {
                data.extend((0..k).map(|j| to_final(shift(base[(j + k - r) % k], c, modulus))));
            }
        }
    }
    OrthogonalArray::from_flat(k, n, lambda, data)
}

fn developed_rows(s: &StartingRowSet) -> usize {
    s.base_rows().len() * s.k() * s.development().shifts(s.n()) + s.m()
}

/// Aggregated counts of symbol pairs `(row[i], row[i+d mod k])` over all base
/// rows and positions, for each distance `d ∈ 1..=⌊k/2⌋`, with the shifts
/// of the development folded in. Symbols are indexed in the final alphabet
/// (∞ = 0, z = z+1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    k: usize,
    n: usize,
    counts: Vec<u64>,
}

impl DistanceProfile {
    fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            counts: vec![0; (k / 2) * n * n],
        }
    }

    pub fn max_distance(&self) -> usize {
        self.k / 2
    }

    /// Count of the ordered pair `(x, y)` (final-alphabet symbols) at distance `d`.
    pub fn count(&self, d: usize, x: u8, y: u8) -> u64 {
        assert!((1..=self.k / 2).contains(&d), "distance {d} out of range");
        self.counts[((d - 1) * self.n + x as usize) * self.n + y as usize]
    }

    /// All `n²` counts at distance `d`, row-major in `(x, y)`.
    pub fn at_distance(&self, d: usize) -> &[u64] {
        let nn = self.n * self.n;
        &self.counts[(d - 1) * nn..d * nn]
    }

    pub fn total_at(&self, d: usize) -> u64 {
        self.at_distance(d).iter().sum()
    }
}

pub fn distance_profile(s: &StartingRowSet) -> DistanceProfile {
    let (k, n) = (s.k(), s.n());
    let modulus = (n - 1) as u8;
    let shifts = s.development().shifts(n) as u8;
    let mut profile = DistanceProfile::new(k, n);
    for row in s.base_rows() {
        for d in 1..=k / 2 {
            for i in 0..k {
                let (x, y) = (row[i], row[(i + d) % k]);
                for c in 0..shifts {
                    let fx = to_final(shift(x, c, modulus)) as usize;
                    let fy = to_final(shift(y, c, modulus)) as usize;
                    profile.counts[((d - 1) * n + fx) * n + fy] += 1;
                }
            }
        }
    }
    profile
}

/// Decides from the base rows whether `develop(s)` is an `OA_λ(k, n)` with
/// `λ = target_lambda`.
///
/// A column pair at cyclic distance `d` sees exactly the distance-`d` profile
/// (or its transpose for distance `k−d`), plus the `m` constant rows on
/// `(∞, ∞)`. This holds for `d = k/2` with even `k` as well, since the profile
/// counts every start position `i`.
pub fn distance_check(s: &StartingRowSet, target_lambda: u64) -> (bool, DistanceProfile) {
    let profile = distance_profile(s);
    let n = s.n();
    let m = s.m() as u64;
    let ok = (1..=profile.max_distance()).all(|d| {
        profile.at_distance(d).iter().enumerate().all(|(cell, &c)| {
            let extra = if cell == 0 { m } else { 0 };
            c + extra == target_lambda
        })
    }) && developed_rows(s) as u64 == target_lambda * (n * n) as u64;
    (ok, profile)
}

/// Least rotation (and shift, when `shifts > 1`) of `row` under final-alphabet order.
fn canonical(row: &[u8], shifts: u8, modulus: u8) -> Vec<u8> {
    let k = row.len();
    let mut best: Option<Vec<u8>> = None;
    for r in 0..k {
        for c in 0..shifts {
            let cand: Vec<u8> = (0..k)
                .map(|j| to_final(shift(row[(j + r) % k], c, modulus)))
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("k >= 1").into_iter().map(to_internal).collect()
}

struct Search {
    k: usize,
    n: usize,
    m: usize,
    base_count: usize,
    abar: usize,
    modulus: u8,
    shifts: u8,
    development: Development,
    targets: Vec<u64>,
    counts: Vec<u64>,
    rows: Vec<Vec<u8>>,
    limit: usize,
    found: Vec<StartingRowSet>,
}

impl Search {
    fn cell(&self, d: usize, x: u8, y: u8) -> usize {
        ((d - 1) * self.n + to_final(x) as usize) * self.n + to_final(y) as usize
    }

    /// Adds the pairs between position `j` of row `t` and its earlier
    /// positions. Returns false if some count now exceeds its target.
    fn add(&mut self, t: usize, j: usize) -> bool {
        let k = self.k;
        let mut ok = true;
        for i in 0..j {
            let dist = j - i;
            let (a, b) = (self.rows[t][i], self.rows[t][j]);
            let mut pairs = [(0usize, 0u8, 0u8); 2];
            let mut len = 0;
            if dist <= k / 2 {
                pairs[len] = (dist, a, b);
                len += 1;
            }
            if k - dist <= k / 2 {
                pairs[len] = (k - dist, b, a);
                len += 1;
            }
            for &(d, x, y) in &pairs[..len] {
                for c in 0..self.shifts {
                    let idx = self.cell(d, shift(x, c, self.modulus), shift(y, c, self.modulus));
                    self.counts[idx] += 1;
                    ok &= self.counts[idx] <= self.targets[idx];
                }
            }
        }
        ok
    }

    fn remove(&mut self, t: usize, j: usize) {
        let k = self.k;
        for i in 0..j {
            let dist = j - i;
            let (a, b) = (self.rows[t][i], self.rows[t][j]);
            if dist <= k / 2 {
                for c in 0..self.shifts {
                    let idx = self.cell(dist, shift(a, c, self.modulus), shift(b, c, self.modulus));
                    self.counts[idx] -= 1;
                }
            }
            if k - dist <= k / 2 {
                for c in 0..self.shifts {
                    let idx = self.cell(
                        k - dist,
                        shift(b, c, self.modulus),
                        shift(a, c, self.modulus),
                    );
                    self.counts[idx] -= 1;
                }
            }
        }
    }

    fn run(&mut self, t: usize, j: usize, infinities: usize, tight: bool) {
        if self.found.len() >= self.limit {
            return;
        }
        if t == self.base_count {
            let set = StartingRowSet::with_development(
                self.k,
                self.n,
                self.m,
                self.development,
                self.rows.clone(),
            )
            .expect("search only produces well-formed rows");
            self.found.push(set);
            return;
        }
        if j == self.k {
            if canonical(&self.rows[t], self.shifts, self.modulus) == self.rows[t] {
                self.run(t + 1, 0, 0, t + 1 < self.base_count);
            }
            return;
        }
        let remaining = self.k - j;
        let lower = if tight {
            to_final(self.rows[t - 1][j])
        } else {
            0
        };
        for f in lower..self.n as u8 {
            let sym = to_internal(f);
            let inf = infinities + (sym == INFINITY) as usize;
            if inf > self.abar || self.abar - inf > remaining - 1 {
                continue;
            }
            self.rows[t][j] = sym;
            if self.add(t, j) {
                let still_tight = tight && f == lower;
                self.run(t, j + 1, inf, still_tight);
            }
            self.remove(t, j);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Deterministic lexicographic backtracking for starting rows of a
/// feasible `(m, λ, k, n)`.
///
/// Every base row has exactly `(k−1)/n` entries ∞ and is the least
/// representative of its rotations (and shifts, under modular development);
/// base rows are nondecreasing. Branches are cut as soon as a partial distance-profile count
/// exceeds its target. Returns at most `limit` sets; an empty result means the
/// space was exhausted.
pub fn search_starting_rows(
    development: Development,
    k: usize,
    n: usize,
    m: usize,
    lambda: u64,
    limit: usize,
) -> Result<Vec<StartingRowSet>> {
    let q = Quadruple::new(m as u64, lambda, k as u64, n as u64);
    if !q.is_feasible() {
        return Err(Error::infeasible(format!(
            "{q} is not a feasible quadruple"
        )));
    }
    if n > crate::designs::MAX_ALPHABET {
        return Err(Error::domain("alphabet too large"));
    }
    let abar = bounds::abar(k as u64, n as u64).expect("feasible") as usize;
    let nn = n * n;
    let base_count = development.base_row_count(n, m);
    let mut targets = vec![lambda; (k / 2) * nn];
    for d in 0..k / 2 {
        targets[d * nn] -= m as u64;
    }
    let mut search = Search {
        k,
        n,
        m,
        base_count,
        abar,
        modulus: (n - 1) as u8,
        shifts: development.shifts(n) as u8,
        development,
        counts: vec![0; targets.len()],
        targets,
        rows: vec![vec![INFINITY; k]; base_count],
        limit,
        found: Vec::new(),
    };
    if limit > 0 {
        search.run(0, 0, 0, false);
    }
    Ok(search.found)
}

/// Reads the `START <k> <n> <m> [rotation]` format: one line per base row,
/// `k` tokens each, every token an integer in `0..n−1` or `*` for ∞. The
/// optional fourth field selects [`Development::Rotation`], which expects
/// `m(n−1)` rows instead of `m`.
pub fn read_start<R: BufRead>(reader: R) -> Result<StartingRowSet> {
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input"))??;
    let fields: Vec<&str> = first.split_whitespace().collect();
    let development = match fields.get(4).copied() {
        None => Development::Modular,
        Some("rotation") => Development::Rotation,
        Some(other) => {
            return Err(Error::parse(
                1,
                format!("unknown development rule `{other}`"),
            ));
        }
    };
    if !(4..=5).contains(&fields.len()) || fields[0] != "START" {
        return Err(Error::parse(
            1,
            "expected header `START <k> <n> <m> [rotation]`",
        ));
    }
    let mut nums = [0usize; 3];
    for (slot, tok) in nums.iter_mut().zip(&fields[1..]) {
        *slot = tok
            .parse()
            .map_err(|_| Error::parse(1, format!("`{tok}` is not a valid integer")))?;
    }
    let [k, n, m] = nums;
    if !(2..=crate::designs::MAX_ALPHABET).contains(&n) {
        return Err(Error::parse(1, format!("alphabet size {n} out of range")));
    }
    let expected = development.base_row_count(n, m);
    let mut rows = Vec::with_capacity(expected);
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut row = Vec::with_capacity(k);
        for tok in t.split_whitespace() {
            if tok == "*" {
                row.push(INFINITY);
                continue;
            }
            let z: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad token `{tok}`")))?;
            if z + 1 >= n {
                return Err(Error::parse(
                    line_no,
                    format!("symbol {z} outside Z_{}", n - 1),
                ));
            }
            row.push(z as u8);
        }
        if row.len() != k {
            return Err(Error::parse(
                line_no,
                format!("row has {} tokens, expected {k}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != expected {
        return Err(Error::parse(
            rows.len() + 2,
            format!("found {} rows, expected {expected}", rows.len()),
        ));
    }
    StartingRowSet::with_development(k, n, m, development, rows)
        .map_err(|e| Error::parse(1, e.to_string()))
}

pub fn parse_start(text: &str) -> Result<StartingRowSet> {
    read_start(BufReader::new(text.as_bytes()))
}

pub fn write_start<W: Write>(s: &StartingRowSet, mut w: W) -> std::io::Result<()> {
    write!(w, "START {} {} {}", s.k(), s.n(), s.m())?;
    match s.development() {
        Development::Modular => writeln!(w)?,
        Development::Rotation => writeln!(w, " rotation")?,
    }
    for row in s.base_rows() {
        let tokens: Vec<String> = row
            .iter()
            .map(|&x| {
                if x == INFINITY {
                    "*".to_string()
                } else {
                    x.to_string()
                }
            })
            .collect();
        writeln!(w, "{}", tokens.join(" "))?;
    }
    Ok(())
}
