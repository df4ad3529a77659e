//! Observation matrices and CSV ingestion.

use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Minimum sample size; the Fisher-Z null variance 1/(n-3) needs n > 3.
pub const MIN_ROWS: usize = 4;

/// An n x p observation matrix: rows are subjects, columns are variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    column_names: Vec<String>,
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>, column_names: Option<Vec<String>>) -> Result<Self> {
        let (n, p) = values.shape();
        if n < MIN_ROWS {
            return Err(Error::Input(format!(
                "need at least {MIN_ROWS} rows, found {n}"
            )));
        }
        if p < 2 {
            return Err(Error::Input(format!("need at least 2 columns, found {p}")));
        }
        for j in 0..p {
            for i in 0..n {
                if !values[(i, j)].is_finite() {
                    return Err(Error::Cell {
                        row: i + 1,
                        column: j + 1,
                        message: format!("non-finite value {}", values[(i, j)]),
                    });
                }
            }
        }
        let column_names = match column_names {
            Some(names) if names.len() != p => {
                return Err(Error::Input(format!(
                    "{} column names for {p} columns",
                    names.len()
                )))
            }
            Some(names) => names,
            None => default_names(p),
        };
        Ok(Self {
            values,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Centre each column and scale it to unit sample standard deviation.
    /// Constant columns are only centred.
    pub fn standardized(&self) -> Self {
        let n = self.n() as f64;
        let mut values = self.values.clone();
        for mut col in values.column_iter_mut() {
            let mean = col.iter().sum::<f64>() / n;
            col.iter_mut().for_each(|x| *x -= mean);
            let sd = (col.iter().map(|x| x * x).sum::<f64>() / (n - 1.0)).sqrt();
            if sd > 0.0 {
                col.iter_mut().for_each(|x| *x /= sd);
            }
        }
        Self {
            values,
            column_names: self.column_names.clone(),
        }
    }

    /// Reorder columns: column `k` of the result is column `order[k]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        let values = DMatrix::from_fn(self.n(), self.p(), |i, k| self.values[(i, order[k])]);
        let column_names = order
            .iter()
            .map(|&j| self.column_names[j].clone())
            .collect();
        Self {
            values,
            column_names,
        }
    }
}

fn default_names(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("V{j}")).collect()
}

/// Read a rectangular numeric CSV from disk.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DataMatrix> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(file, has_header)
}

/// Parse a rectangular numeric CSV. Row and column numbers in errors are
/// 1-based and count data rows only (the header is not row 1).
pub fn parse_csv<R: Read>(reader: R, has_header: bool) -> Result<DataMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut width: Option<usize> = None;
    let mut cells: Vec<f64> = Vec::new();
    let mut rows = 0usize;

    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            row: idx + if has_header { 0 } else { 1 },
            message: e.to_string(),
        })?;
        if has_header && idx == 0 {
            let names: Vec<String> = record.iter().map(str::to_string).collect();
            width = Some(names.len());
            header = Some(names);
            continue;
        }
        // Skip blank trailing lines.
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        rows += 1;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                row: rows,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::Cell {
                row: rows,
                column: j + 1,
                message: format!("not a number: {field:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Cell {
                    row: rows,
                    column: j + 1,
                    message: format!("non-finite value {field:?}"),
                });
            }
            cells.push(value);
        }
    }

    let p = width.unwrap_or(0);
    if rows == 0 || p == 0 {
        return Err(Error::Input("no data rows".into()));
    }
    let values = DMatrix::from_row_slice(rows, p, &cells);
    DataMatrix::new(values, header)
}
