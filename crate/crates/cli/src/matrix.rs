//! Plain-text complex matrix files.
//!
//! The first non-empty line holds the dimension `n`; each of the next `n`
//! lines holds `n` whitespace-separated `re,im` pairs. Lines starting with
//! `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use unfold_core::ops::CMatrix;

#[derive(Debug, thiserror::Error)]
pub enum MatrixFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} rows, found {found}")]
    MissingRows { expected: usize, found: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> MatrixFileError {
    MatrixFileError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_entry(token: &str, line: usize) -> Result<Complex64, MatrixFileError> {
    let (re, im) = token
        .split_once(',')
        .ok_or_else(|| syntax(line, format!("entry `{token}` is not a `re,im` pair")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| syntax(line, format!("`{s}` is not a finite number")))
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, MatrixFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or_else(|| syntax(1, "empty matrix file"))?;
    let n: usize = header
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| syntax(first, format!("expected a positive dimension, found `{header}`")))?;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line, text) in lines {
        if rows == n {
            return Err(syntax(line, format!("unexpected content after {n} rows")));
        }
        let row = text
            .split_whitespace()
            .map(|t| parse_entry(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(syntax(line, format!("expected {n} entries, found {}", row.len())));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(MatrixFileError::MissingRows {
            expected: n,
            found: rows,
        });
    }
    Ok(CMatrix::from_row_slice(n, n, &data))
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, MatrixFileError> {
    let text = fs::read_to_string(path).map_err(|source| MatrixFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

/// Formats a matrix so that [`parse_matrix`] reads it back exactly.
pub fn format_matrix(m: &CMatrix) -> String {
    let mut out = format!("{}\n", m.nrows());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            // Adding zero turns -0 into 0.
            .map(|j| format!("{},{}", m[(i, j)].re + 0.0, m[(i, j)].im + 0.0))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
