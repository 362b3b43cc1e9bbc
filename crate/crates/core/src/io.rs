// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Point matrices and label vectors on disk.
//!
//! Two matrix formats are supported:
//!
//! * CSV: comma separated, one row per line, no header unless requested.
//!   Values are written with the shortest representation that parses back
//!   to the identical `f64`.
//! * DTRC binary: the 4 magic bytes `DTRC`, a little-endian `u32` version
//!   (currently 1), little-endian `u64` point and dimension counts, followed
//!   by the row-major little-endian `f64` payload.
//!
//! Label files hold one signed integer per line.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::labels::LabelVector;

pub const MAGIC: &[u8; 4] = b"DTRC";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("no data")]
    Empty,
    #[error("not a DTRC file (bad magic bytes)")]
    BadMagic,
    #[error("unsupported DTRC version {0}")]
    UnsupportedVersion(u32),
    #[error("DTRC payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Dense row-major `n_points x n_dims` matrix of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n_points: usize,
    n_dims: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(n_points: usize, n_dims: usize, values: Vec<f64>) -> Result<Self, IoError> {
        if n_points == 0 || n_dims == 0 {
            return Err(IoError::Empty);
        }
        if values.len() != n_points * n_dims {
            return Err(IoError::Shape(format!(
                "{} values for a {}x{} matrix",
                values.len(),
                n_points,
                n_dims
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(IoError::NonFinite {
                row: pos / n_dims + 1,
                col: pos % n_dims + 1,
            });
        }
        Ok(Self {
            n_points,
            n_dims,
            values,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, IoError> {
        let n_dims = rows.first().map(|r| r.as_ref().len()).ok_or(IoError::Empty)?;
        let mut values = Vec::with_capacity(rows.len() * n_dims);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_dims {
                return Err(IoError::Parse {
                    row: i + 1,
                    message: format!("expected {} columns, found {}", n_dims, r.len()),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), n_dims, values)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_dims..(i + 1) * self.n_dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_dims)
    }

    /// Euclidean distance between rows `a` and `b`.
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_points: self.n_points,
            n_dims: self.n_dims,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut values = Vec::with_capacity(rows.len() * self.n_dims);
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        Self {
            n_points: rows.len(),
            n_dims: self.n_dims,
            values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Binary,
}

impl MatrixFormat {
    /// Sniff the magic bytes; anything that is not DTRC is read as CSV.
    pub fn detect(path: &Path) -> Result<Self, IoError> {
        let bytes = fs::read(path).map_err(io_err(path))?;
        Ok(if bytes.starts_with(MAGIC) {
            MatrixFormat::Binary
        } else {
            MatrixFormat::Csv
        })
    }

    pub fn from_extension(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("dtrc") => MatrixFormat::Binary,
            _ => MatrixFormat::Csv,
        }
    }
}

pub fn load_matrix(path: &Path, format: MatrixFormat, header: bool) -> Result<DataMatrix, IoError> {
    match format {
        MatrixFormat::Csv => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            parse_csv(&text, header)
        }
        MatrixFormat::Binary => {
            let bytes = fs::read(path).map_err(io_err(path))?;
            decode_binary(&bytes)
        }
    }
}

pub fn save_matrix(m: &DataMatrix, path: &Path, format: MatrixFormat) -> Result<(), IoError> {
    let bytes = match format {
        MatrixFormat::Csv => to_csv(m).into_bytes(),
        MatrixFormat::Binary => encode_binary(m),
    };
    fs::write(path, bytes).map_err(io_err(path))
}

pub fn parse_csv(text: &str, header: bool) -> Result<DataMatrix, IoError> {
    let mut n_dims = None;
    let mut n_points = 0;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(usize::from(header)) {
        let row = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for (col, cell) in line.split(',').enumerate() {
            let cell = cell.trim();
            let v: f64 = cell.parse().map_err(|_| IoError::Parse {
                row,
                message: format!("cannot parse {cell:?} as a number"),
            })?;
            if !v.is_finite() {
                return Err(IoError::NonFinite { row, col: col + 1 });
            }
            values.push(v);
            count += 1;
        }
        match n_dims {
            None => n_dims = Some(count),
            Some(d) if d != count => {
                return Err(IoError::Parse {
                    row,
                    message: format!("expected {d} columns, found {count}"),
                })
            }
            Some(_) => {}
        }
        n_points += 1;
    }
    let n_dims = n_dims.ok_or(IoError::Empty)?;
    DataMatrix::new(n_points, n_dims, values)
}

pub fn to_csv(m: &DataMatrix) -> String {
    let mut out = String::with_capacity(m.values.len() * 20);
    for row in m.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            // Debug formatting is the shortest string that round-trips.
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn encode_binary(m: &DataMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + m.values.len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(m.n_points as u64).to_le_bytes());
    out.extend_from_slice(&(m.n_dims as u64).to_le_bytes());
    for v in &m.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<DataMatrix, IoError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(IoError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(IoError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(version));
    }
    let n_points = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let n_dims = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    if n_points == 0 || n_dims == 0 {
        return Err(IoError::Empty);
    }
    let expected = n_points
        .checked_mul(n_dims)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(HEADER_LEN))
        .ok_or_else(|| IoError::Shape(format!("{n_points}x{n_dims} overflows")))?;
    if bytes.len() != expected {
        return Err(IoError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    DataMatrix::new(n_points, n_dims, values)
}

pub fn save_labels(labels: &LabelVector, path: &Path) -> Result<(), IoError> {
    if labels.is_empty() {
        return Err(IoError::Empty);
    }
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(format_labels(labels).as_bytes())
        .map_err(io_err(path))
}

pub fn format_labels(labels: &LabelVector) -> String {
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels.iter() {
        let _ = writeln!(out, "{l}");
    }
    out
}

pub fn load_labels(path: &Path) -> Result<LabelVector, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_labels(&text)
}

pub fn parse_labels(text: &str) -> Result<LabelVector, IoError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let l: i64 = line.parse().map_err(|_| IoError::Parse {
            row: lineno + 1,
            message: format!("cannot parse {line:?} as a label"),
        })?;
        if l < -1 {
            return Err(IoError::Parse {
                row: lineno + 1,
                message: format!("label {l} is below -1"),
            });
        }
        out.push(l);
    }
    if out.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(LabelVector::new(out))
}
