//! Plain-text matrix files: one row per line, entries separated by commas.
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every `f64` bit for bit. Blank lines are
//! ignored; rows of differing length are rejected.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Mat;

pub fn parse_matrix(text: &str) -> Result<Mat> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let token = field.trim();
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: lineno,
                column: column + (field.len() - field.trim_start().len()),
                message: format!("cannot parse {token:?} as a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    column,
                    message: format!("non-finite value {token:?}"),
                });
            }
            row.push(value);
            column += field.len() + 1;
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line: lineno,
                    column: 1,
                    message: format!("ragged row: expected {w} entries, found {}", row.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows found".into(),
        });
    }
    Mat::from_rows(&rows)
}

pub fn format_matrix(m: &Mat) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{}", m.get(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Mat> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Mat) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
