//! Plain-text matrix files.
//!
//! ```text
//! 2 2
//! 0 1
//! -1 0
//! ```
//!
//! The first line holds `rows cols`, the rest the entries in row-major
//! order separated by whitespace. Complex entries are written `a+bi` or
//! `a-bi`; a bare `bi` or `i` is accepted on input. Lines starting with `#`
//! are ignored.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matops::{DenseMatrix, RealMatrix};

fn parse_real(token: &str) -> Option<f64> {
    match token {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => t.parse::<f64>().ok(),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (and exponents such as `1e-3-2.5e+1i`).
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let Some(body) = token.strip_suffix(['i', 'j']) else {
        return token.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not the leading one and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = parse_real(&body[k..])?;
            Some(Complex64::new(re, im))
        }
        None => parse_real(body).map(|im| Complex64::new(0.0, im)),
    }
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing \"rows cols\" header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: header_line,
            message: format!("bad header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header needs two integers, got {}", dims.len()),
        });
    };
    let mut entries = Vec::with_capacity(rows * cols);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        for token in content.split_whitespace() {
            let z = parse_complex(token).ok_or_else(|| Error::Parse {
                line,
                message: format!("cannot read entry {token:?}"),
            })?;
            entries.push(z);
        }
    }
    if entries.len() != rows * cols {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {} entries, found {}", rows * cols, entries.len()),
        });
    }
    Ok(DenseMatrix::from_row_slice(rows, cols, &entries))
}

/// Like [`parse_matrix`] but rejects nonzero imaginary parts.
pub fn parse_real_matrix(text: &str) -> Result<RealMatrix> {
    let m = parse_matrix(text)?;
    if m.iter().any(|z| z.im != 0.0) {
        return Err(Error::Parse {
            line: 0,
            message: "expected a real matrix".into(),
        });
    }
    Ok(m.map(|z| z.re))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_matrix(&read(path.as_ref())?)
}

pub fn read_real_matrix(path: impl AsRef<Path>) -> Result<RealMatrix> {
    parse_real_matrix(&read(path.as_ref())?)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_real(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

fn format_with<T>(rows: usize, cols: usize, at: impl Fn(usize, usize) -> T, fmt: impl Fn(T) -> String) -> String {
    let mut out = format!("{rows} {cols}\n");
    for i in 0..rows {
        let row: Vec<String> = (0..cols).map(|j| fmt(at(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    format_with(m.nrows(), m.ncols(), |i, j| m[(i, j)], format_complex)
}

pub fn format_real_matrix(m: &RealMatrix) -> String {
    format_with(m.nrows(), m.ncols(), |i, j| m[(i, j)], format_real)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    write(path.as_ref(), &format_matrix(m))
}

pub fn write_real_matrix(path: impl AsRef<Path>, m: &RealMatrix) -> Result<()> {
    write(path.as_ref(), &format_real_matrix(m))
}
