//! Plain-text matrix and vector files. Matrices are one comma-separated
//! row per line; vectors are one value per line. Blank lines and `#`
//! comment lines are ignored.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use std::path::Path;

const MAX_MATRIX_ENTRIES: usize = 4_000_000;

pub fn parse_matrix_str(text: &str) -> Result<Array2<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| parse_cell(cell, lineno + 1))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} columns, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        if (rows.len() + 1) * row.len() > MAX_MATRIX_ENTRIES {
            return Err(Error::Parse("matrix too large".into()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no data rows".into()));
    }
    let ncols = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let nrows = flat.len() / ncols;
    Array2::from_shape_vec((nrows, ncols), flat)
        .map_err(|e| Error::Parse(format!("matrix shape: {e}")))
}

pub fn parse_vector_str(text: &str) -> Result<Array1<f64>> {
    let matrix = parse_matrix_str(text)?;
    if matrix.ncols() != 1 {
        return Err(Error::Parse(format!(
            "expected a single-column vector, got {} columns",
            matrix.ncols()
        )));
    }
    Ok(matrix.column(0).to_owned())
}

fn parse_cell(cell: &str, lineno: usize) -> Result<f64> {
    let value: f64 = cell
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {lineno}: bad number {cell:?}")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!(
            "line {lineno}: non-finite entry {cell:?}"
        )));
    }
    Ok(value)
}

pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    parse_matrix_str(&std::fs::read_to_string(path)?)
}

pub fn read_vector_csv(path: &Path) -> Result<Array1<f64>> {
    parse_vector_str(&std::fs::read_to_string(path)?)
}

pub fn format_matrix_csv(matrix: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn format_vector_csv(vector: &[f64]) -> String {
    let mut out = String::new();
    for v in vector {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: &Path, matrix: &Array2<f64>) -> Result<()> {
    Ok(std::fs::write(path, format_matrix_csv(matrix))?)
}

pub fn write_vector_csv(path: &Path, vector: &[f64]) -> Result<()> {
    Ok(std::fs::write(path, format_vector_csv(vector))?)
}
