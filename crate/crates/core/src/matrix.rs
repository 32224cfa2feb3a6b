//! Dense row-major matrices realized by circuits, plus the small CSV format
//! used by the `spectra` subcommand.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("scale must be a positive finite number, got {0}")]
    InvalidScale(f64),
    #[error("line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

/// The dense `m x d` matrix `B` computed by a circuit, with the output scale
/// `s` carried alongside. `B` never includes the `s^{-1/2}` factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    scale: f64,
}

impl RealizedMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>, scale: f64) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(MatrixError::InvalidScale(scale));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            scale,
        })
    }

    /// Builds a matrix from nested rows, all of which must share a length.
    pub fn from_rows(rows: &[Vec<f64>], scale: f64) -> Result<Self, MatrixError> {
        let m = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(m * d);
        for row in rows {
            if row.len() != d {
                return Err(MatrixError::EntryCount {
                    rows: m,
                    cols: d,
                    expected: m * d,
                    actual: entries.len() + row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(m, d, entries, scale)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Returns a copy with every entry multiplied by `factor` and the given scale.
    pub fn scaled(&self, factor: f64, scale: f64) -> Result<Self, MatrixError> {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|v| v * factor).collect(),
            scale,
        )
    }

    /// `Bx`, without the scale factor.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        self.entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Sum of squared entries, i.e. `Tr(BᵀB)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Serializes as CSV: a first line `m,d` followed by `m` lines of `d` values.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.rows, self.cols);
        for row in self.entries.chunks_exact(self.cols) {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:?}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`RealizedMatrix::to_csv`].
    pub fn from_csv(text: &str, scale: f64) -> Result<Self, MatrixError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let parse_err = |line: usize, msg: String| MatrixError::Csv { line, msg };

        let header = records
            .next()
            .ok_or_else(|| parse_err(1, "missing `m,d` header".into()))?
            .map_err(|e| parse_err(1, e.to_string()))?;
        if header.len() != 2 {
            return Err(parse_err(1, format!("header must be `m,d`, got {} fields", header.len())));
        }
        let dim = |k: usize| -> Result<usize, MatrixError> {
            header[k]
                .parse::<usize>()
                .map_err(|e| parse_err(1, format!("bad dimension {:?}: {e}", &header[k])))
        };
        let (m, d) = (dim(0)?, dim(1)?);

        let mut entries = Vec::with_capacity(m * d);
        let mut seen = 0;
        for (k, record) in records.enumerate() {
            let line = k + 2;
            let record = record.map_err(|e| parse_err(line, e.to_string()))?;
            if record.len() != d {
                return Err(parse_err(line, format!("expected {d} values, got {}", record.len())));
            }
            for field in record.iter() {
                let v = field
                    .parse::<f64>()
                    .map_err(|e| parse_err(line, format!("bad value {field:?}: {e}")))?;
                entries.push(v);
            }
            seen += 1;
        }
        if seen != m {
            return Err(parse_err(seen + 2, format!("expected {m} rows, got {seen}")));
        }
        Self::new(m, d, entries, scale)
    }
}
