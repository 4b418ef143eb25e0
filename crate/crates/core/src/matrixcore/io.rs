//! Plain-text matrix format: a first line holding `dim`, then `dim * dim`
//! lines `re im` in row-major order.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", m.dim());
    for z in m.as_slice() {
        let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dim: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
    let mut data = Vec::with_capacity(dim * dim);
    for (lineno, line) in lines {
        let mut parts = line.split_whitespace();
        let mut next = || -> Result<f64> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected `re im`", lineno + 1)))?;
            tok.parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {tok:?}", lineno + 1)))
        };
        let re = next()?;
        let im = next()?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing data", lineno + 1)));
        }
        data.push(Complex64::new(re, im));
    }
    if data.len() != dim * dim {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            dim * dim,
            data.len()
        )));
    }
    ComplexMatrix::new(dim, data)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}
