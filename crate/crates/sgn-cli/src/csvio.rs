//! Deterministic CSV reading and writing.
//!
//! Floats are rendered with [`fmt_float`], which is locale-independent and
//! exact to the last bit, so repeated runs with identical inputs produce
//! byte-identical files.

use crate::CliError;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Renders a float with full round-trip precision in scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Line-buffered CSV writer with a fixed column count.
pub struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
    columns: usize,
}

impl CsvFile {
    /// Creates the file (truncating) and writes the header row.
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let file = File::create(path).map_err(|e| CliError::output(path, e))?;
        let mut this =
            Self { path: path.to_path_buf(), out: BufWriter::new(file), columns: header.len() };
        this.write_line(header.iter().map(|s| s.to_string()))?;
        Ok(this)
    }

    /// Writes one data row; the cell count must match the header.
    pub fn row(&mut self, cells: &[String]) -> Result<(), CliError> {
        debug_assert_eq!(cells.len(), self.columns, "column count mismatch in {:?}", self.path);
        self.write_line(cells.iter().cloned())
    }

    /// Convenience for all-float rows.
    pub fn float_row(&mut self, values: &[f64]) -> Result<(), CliError> {
        let cells: Vec<String> = values.iter().copied().map(fmt_float).collect();
        self.row(&cells)
    }

    /// Flushes and returns the path for reporting.
    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.out.flush().map_err(|e| CliError::output(&self.path, e))?;
        Ok(self.path)
    }

    fn write_line(&mut self, cells: impl Iterator<Item = String>) -> Result<(), CliError> {
        let line = cells.collect::<Vec<_>>().join(",");
        writeln!(self.out, "{line}").map_err(|e| CliError::output(&self.path, e))
    }
}

/// Reads a two-column numeric CSV (optional header), e.g. experimental
/// reference data for result overlays.
pub fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Reference { path: path.to_path_buf(), reason: e.to_string() })?;
    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Reference {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let mut cells = record.iter();
        let (Some(a), Some(b)) = (cells.next(), cells.next()) else {
            return Err(CliError::Reference {
                path: path.to_path_buf(),
                reason: format!("row {} has fewer than two columns", i + 1),
            });
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(a), Ok(b)) => pairs.push((a, b)),
            // A single non-numeric leading row acts as the header.
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Reference {
                    path: path.to_path_buf(),
                    reason: format!("row {} is not numeric", i + 1),
                })
            }
        }
    }
    Ok(pairs)
}
