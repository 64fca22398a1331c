//! Matrix files: JSON `{"rows", "cols", "data"}` (numbers, or `"num/den"`
//! strings for exact matrices), a bare JSON array read as a column vector,
//! or headerless CSV of reals.

use std::path::Path;

use serde_json::Value;

use super::dense::DenseMatrix;
use super::rational::RationalMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Real(DenseMatrix),
    Rational(RationalMatrix),
}

impl MatrixFile {
    pub fn rows(&self) -> usize {
        match self {
            MatrixFile::Real(m) => m.rows(),
            MatrixFile::Rational(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixFile::Real(m) => m.cols(),
            MatrixFile::Rational(m) => m.cols(),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, MatrixFile::Rational(_))
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        match self {
            MatrixFile::Real(m) => Ok(m.clone()),
            MatrixFile::Rational(m) => m.to_dense(),
        }
    }

    /// Exact values; real entries convert without rounding.
    pub fn to_rational(&self) -> Result<RationalMatrix> {
        match self {
            MatrixFile::Real(m) => RationalMatrix::from_dense(m),
            MatrixFile::Rational(m) => Ok(m.clone()),
        }
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        return parse_json_value(value);
    }
    parse_csv(text)
}

fn parse_json_value(value: Value) -> Result<MatrixFile> {
    let bad = |e: serde_json::Error| Error::Parse(format!("matrix JSON: {e}"));
    match value {
        Value::Array(items) => {
            let rational = items.iter().any(Value::is_string);
            let wrapped = serde_json::json!({"rows": items.len(), "cols": 1, "data": items});
            if rational {
                Ok(MatrixFile::Rational(
                    serde_json::from_value(wrapped).map_err(bad)?,
                ))
            } else {
                Ok(MatrixFile::Real(
                    serde_json::from_value(wrapped).map_err(bad)?,
                ))
            }
        }
        Value::Object(ref obj) => {
            let rational = obj
                .get("data")
                .and_then(Value::as_array)
                .is_some_and(|d| d.iter().any(Value::is_string));
            if rational {
                Ok(MatrixFile::Rational(
                    serde_json::from_value(value).map_err(bad)?,
                ))
            } else {
                Ok(MatrixFile::Real(
                    serde_json::from_value(value).map_err(bad)?,
                ))
            }
        }
        _ => Err(Error::Parse(
            "matrix JSON must be an object or array".into(),
        )),
    }
}

fn parse_csv(text: &str) -> Result<MatrixFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("CSV row {i}: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("CSV row {i}: {field:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    Ok(MatrixFile::Real(DenseMatrix::from_rows(&rows)?))
}
