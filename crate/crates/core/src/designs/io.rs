//! Plain-text file formats.
//!
//! ```text
//! OA <k> <n> <lambda>        then λn² lines of k space-separated symbols
//! BIBD <v> <b> <r> <k> <λ>   then b lines of v characters from {0,1}
//! HAD <order>                then order lines of order characters from {+,-}
//! ```
//!
//! Lines starting with `#` after the header are comments (used for class
//! labels on partition output). Writers emit canonical text: single spaces,
//! no trailing whitespace, every line newline-terminated.

use std::io::{BufRead, BufReader, Write};

use super::{check_dimensions, BlockDesign, HadamardMatrix, OrthogonalArray};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OaHeader {
    pub k: usize,
    pub n: usize,
    pub lambda: u64,
}

impl OaHeader {
    pub fn rows(&self) -> u128 {
        self.lambda as u128 * (self.n as u128) * (self.n as u128)
    }
}

fn header_fields<'a>(line: &'a str, tag: &str, count: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.first() != Some(&tag) || fields.len() != count + 1 {
        return Err(Error::parse(
            1,
            format!("expected header `{tag}` followed by {count} integers"),
        ));
    }
    Ok(fields[1..].to_vec())
}

fn parse_int<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} `{token}` is not a valid integer")))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Incremental OA reader: the header is parsed on construction, rows are
/// validated one at a time.
pub struct OaRows<R> {
    lines: std::io::Lines<R>,
    header: OaHeader,
    expected: u128,
    count: u128,
    line_no: usize,
    row: Vec<u8>,
}

impl<R: BufRead> OaRows<R> {
    pub fn new(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty input"))??;
        let fields = header_fields(&first, "OA", 3)?;
        let header = OaHeader {
            k: parse_int(fields[0], 1, "k")?,
            n: parse_int(fields[1], 1, "n")?,
            lambda: parse_int(fields[2], 1, "lambda")?,
        };
        let expected = check_dimensions(header.k, header.n, header.lambda)
            .map_err(|e| Error::parse(1, e.to_string()))?;
        Ok(Self {
            lines,
            header,
            expected,
            count: 0,
            line_no: 1,
            row: Vec::with_capacity(header.k),
        })
    }

    pub fn header(&self) -> OaHeader {
        self.header
    }

    /// The next row, or `None` after the last one. Errors if the row count
    /// differs from `λn²`.
    pub fn next_row(&mut self) -> Result<Option<&[u8]>> {
        let header = self.header;
        loop {
            let Some(line) = self.lines.next() else {
                if self.count != self.expected {
                    return Err(Error::parse(
                        self.line_no + 1,
                        format!(
                            "found {} rows, expected lambda*n^2 = {}",
                            self.count, self.expected
                        ),
                    ));
                }
                return Ok(None);
            };
            self.line_no += 1;
            let line_no = self.line_no;
            let line = line?;
            if is_skippable(&line) {
                continue;
            }
            self.row.clear();
            for token in line.split_whitespace() {
                let s: u64 = parse_int(token, line_no, "symbol")?;
                if s >= header.n as u64 {
                    return Err(Error::parse(
                        line_no,
                        format!("symbol {s} outside 0..{}", header.n),
                    ));
                }
                self.row.push(s as u8);
            }
            if self.row.len() != header.k {
                return Err(Error::parse(
                    line_no,
                    format!("row has {} symbols, expected {}", self.row.len(), header.k),
                ));
            }
            self.count += 1;
            if self.count > self.expected {
                return Err(Error::parse(
                    line_no,
                    format!("more than lambda*n^2 = {} rows", self.expected),
                ));
            }
            return Ok(Some(&self.row));
        }
    }
}

/// Reads an OA file row by row, handing each validated row to `sink`.
///
/// Nothing beyond one row is held in memory, so arbitrarily large arrays can
/// be verified as they are read.
pub fn read_oa_rows<R, F>(reader: R, mut sink: F) -> Result<OaHeader>
where
    R: BufRead,
    F: FnMut(&[u8]),
{
    let mut rows = OaRows::new(reader)?;
    while let Some(row) = rows.next_row()? {
        sink(row);
    }
    Ok(rows.header())
}

pub fn read_oa<R: BufRead>(reader: R) -> Result<OrthogonalArray> {
    let mut data = Vec::new();
    let header = read_oa_rows(reader, |row| data.extend_from_slice(row))?;
    OrthogonalArray::from_flat(header.k, header.n, header.lambda, data)
}

pub fn parse_oa(text: &str) -> Result<OrthogonalArray> {
    read_oa(BufReader::new(text.as_bytes()))
}

pub fn write_oa_header<W: Write>(mut w: W, k: usize, n: usize, lambda: u64) -> std::io::Result<()> {
    writeln!(w, "OA {k} {n} {lambda}")
}

pub fn write_oa_row<W: Write>(mut w: W, row: &[u8]) -> std::io::Result<()> {
    let mut line = String::with_capacity(row.len() * 4);
    for (j, s) in row.iter().enumerate() {
        if j > 0 {
            line.push(' ');
        }
        line.push_str(&s.to_string());
    }
    line.push('\n');
    w.write_all(line.as_bytes())
}

pub fn write_oa<W: Write>(a: &OrthogonalArray, mut w: W) -> std::io::Result<()> {
    write_oa_header(&mut w, a.k(), a.n(), a.lambda())?;
    for row in a.rows() {
        write_oa_row(&mut w, row)?;
    }
    Ok(())
}

fn char_rows(
    lines: impl Iterator<Item = std::io::Result<String>>,
    width: usize,
    alphabet: [char; 2],
) -> Result<Vec<Vec<u8>>> {
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let mut row = Vec::with_capacity(width);
        for c in line.trim_end().chars() {
            if c == alphabet[0] {
                row.push(0);
            } else if c == alphabet[1] {
                row.push(1);
            } else {
                return Err(Error::parse(line_no, format!("unexpected character `{c}`")));
            }
        }
        if row.len() != width {
            return Err(Error::parse(
                line_no,
                format!("line has {} characters, expected {width}", row.len()),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_bibd<R: BufRead>(reader: R) -> Result<BlockDesign> {
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input"))??;
    let f = header_fields(&first, "BIBD", 5)?;
    let v: usize = parse_int(f[0], 1, "v")?;
    let b: usize = parse_int(f[1], 1, "b")?;
    let r: usize = parse_int(f[2], 1, "r")?;
    let k: usize = parse_int(f[3], 1, "k")?;
    let lambda: usize = parse_int(f[4], 1, "lambda")?;
    let rows = char_rows(lines, v, ['0', '1'])?;
    if rows.len() != b {
        return Err(Error::parse(
            rows.len() + 2,
            format!("found {} blocks, expected {b}", rows.len()),
        ));
    }
    BlockDesign::new(v, b, r, k, lambda, rows)
}

pub fn parse_bibd(text: &str) -> Result<BlockDesign> {
    read_bibd(BufReader::new(text.as_bytes()))
}

pub fn write_bibd<W: Write>(d: &BlockDesign, mut w: W) -> std::io::Result<()> {
    let (v, b, r, k, lambda) = d.parameters();
    writeln!(w, "BIBD {v} {b} {r} {k} {lambda}")?;
    for block in d.blocks() {
        let mut line: String = block
            .iter()
            .map(|&x| if x == 1 { '1' } else { '0' })
            .collect();
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_hadamard<R: BufRead>(reader: R) -> Result<HadamardMatrix> {
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input"))??;
    let f = header_fields(&first, "HAD", 1)?;
    let order: usize = parse_int(f[0], 1, "order")?;
    let rows = char_rows(lines, order, ['-', '+'])?;
    if rows.len() != order {
        return Err(Error::parse(
            rows.len() + 2,
            format!("found {} rows, expected {order}", rows.len()),
        ));
    }
    let entries = rows
        .into_iter()
        .flatten()
        .map(|x| if x == 1 { 1 } else { -1 })
        .collect();
    HadamardMatrix::new(order, entries)
}

pub fn parse_hadamard(text: &str) -> Result<HadamardMatrix> {
    read_hadamard(BufReader::new(text.as_bytes()))
}

pub fn write_hadamard<W: Write>(h: &HadamardMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "HAD {}", h.order())?;
    for row in h.rows() {
        let mut line: String = row
            .iter()
            .map(|&x| if x == 1 { '+' } else { '-' })
            .collect();
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}
