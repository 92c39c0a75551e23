//! Series file format.
//!
//! ```text
//! series m=<degree_bound> p=<precision_bits>
//! <k> <re> <im>        one line per k = 0..=m, in order
//! ```
//!
//! `re` and `im` are lowercase hexadecimal float literals with an explicit
//! binary exponent (`0x1.8p+1`, zero as `0x0p+0`). Coefficients are stored
//! normalized, exactly as held in memory: the file for `sum a_k t^k/k!` lists
//! `a_k`, not the raw Taylor coefficient `a_k/k!`. Keeping the normalized
//! values makes write-then-read bit-identical.

use std::fmt::Write as _;

use super::{NormalizedSeries, PrecisionComplex, PrecisionReal, MIN_PRECISION};
use crate::error::{Error, Result};

/// Largest degree bound accepted from a file.
pub const MAX_FILE_DEGREE: usize = 1 << 20;
/// Largest precision accepted from a file.
pub const MAX_FILE_PRECISION: u32 = 1 << 24;

pub fn write_series(s: &NormalizedSeries) -> String {
    let mut out = String::new();
    writeln!(out, "series m={} p={}", s.degree_bound(), s.prec()).unwrap();
    for (k, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{k} {} {}", c.re.to_hex(), c.im.to_hex()).unwrap();
    }
    out
}

/// Splits a byte stream into numbered UTF-8 lines (1-based).
pub(crate) fn text_lines(bytes: &[u8]) -> impl Iterator<Item = (usize, Result<&str>)> {
    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines.into_iter().enumerate().map(|(i, raw)| {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|_| Error::parse(i + 1, "invalid UTF-8"));
        (i + 1, line)
    })
}

pub(crate) fn parse_key_value<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<value>`, found `{token}`")))
}

pub fn parse_series(bytes: &[u8]) -> Result<NormalizedSeries> {
    let mut lines = text_lines(bytes);
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty series file"))?;
    let header = header?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "series" {
        return Err(Error::parse(1, "header must be `series m=<m> p=<p>`"));
    }
    let m: usize = parse_key_value(tokens[1], "m", 1)?
        .parse()
        .map_err(|_| Error::parse(1, "degree bound is not a non-negative integer"))?;
    let p: u32 = parse_key_value(tokens[2], "p", 1)?
        .parse()
        .map_err(|_| Error::parse(1, "precision is not a positive integer"))?;
    if m > MAX_FILE_DEGREE {
        return Err(Error::parse(1, format!("degree bound exceeds {MAX_FILE_DEGREE}")));
    }
    if !(MIN_PRECISION..=MAX_FILE_PRECISION).contains(&p) {
        return Err(Error::parse(
            1,
            format!("precision must lie in {MIN_PRECISION}..={MAX_FILE_PRECISION}"),
        ));
    }

    let mut coeffs = Vec::new();
    let mut last_line = 1;
    for (no, line) in lines {
        last_line = no;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if coeffs.len() > m {
            return Err(Error::parse(no, "more coefficient lines than m+1"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::parse(no, "expected `<k> <re> <im>`"));
        }
        let k: usize = tokens[0]
            .parse()
            .map_err(|_| Error::parse(no, "coefficient index is not an integer"))?;
        if k != coeffs.len() {
            return Err(Error::parse(
                no,
                format!("expected coefficient index {}, found {k}", coeffs.len()),
            ));
        }
        let re = PrecisionReal::parse_hex(tokens[1], p).map_err(|e| Error::parse(no, e.to_string()))?;
        let im = PrecisionReal::parse_hex(tokens[2], p).map_err(|e| Error::parse(no, e.to_string()))?;
        coeffs.push(PrecisionComplex::new(re, im));
    }
    if coeffs.len() != m + 1 {
        return Err(Error::parse(
            last_line,
            format!("expected {} coefficient lines, found {}", m + 1, coeffs.len()),
        ));
    }
    Ok(NormalizedSeries::from_coeffs(coeffs, p))
}
