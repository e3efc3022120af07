//! Column-oriented numeric datasets and per-attribute order statistics.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order statistics of a single attribute.
///
/// Quartiles use the nearest-rank convention on the sorted column:
/// `q1 = sorted[ceil(n/4)]` and `q3 = sorted[ceil(3n/4)]` with 1-based ranks.
/// `stddev` is the population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeStats {
    pub min: f64,
    pub max: f64,
    pub stddev: f64,
    pub iqr: f64,
    pub q1: f64,
    pub q3: f64,
}

impl AttributeStats {
    /// Computes the statistics of `values`. Panics on an empty slice.
    pub fn from_values(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "statistics of an empty column");
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();

        let q1 = sorted[nearest_rank(n, 0.25) - 1];
        let q3 = sorted[nearest_rank(n, 0.75) - 1];

        let mean = sorted.iter().sum::<f64>() / n as f64;
        let var = sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;

        AttributeStats {
            min: sorted[0],
            max: sorted[n - 1],
            stddev: var.sqrt(),
            iqr: q3 - q1,
            q1,
            q3,
        }
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// 1-based rank `ceil(p * n)`, clamped to `[1, n]`.
fn nearest_rank(n: usize, p: f64) -> usize {
    ((p * n as f64).ceil() as usize).clamp(1, n)
}

/// An immutable numeric matrix stored by column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
    names: Option<Vec<String>>,
    stats: Vec<AttributeStats>,
    n: usize,
}

impl Dataset {
    /// Builds a dataset from columns. Every column must have the same
    /// non-zero length and contain only finite values.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for (column, values) in columns.iter().enumerate() {
            if values.len() != n {
                return Err(Error::Config(format!(
                    "column {column} has {} values, expected {n}",
                    values.len()
                )));
            }
            if let Some(row) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, column });
            }
        }
        let stats = columns.iter().map(|c| AttributeStats::from_values(c)).collect();
        Ok(Dataset {
            columns,
            names: None,
            stats,
            n,
        })
    }

    /// Builds a dataset from row-major records.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); d];
        for (row, values) in rows.iter().enumerate() {
            if values.len() != d {
                return Err(Error::RaggedRow {
                    row,
                    expected: d,
                    found: values.len(),
                });
            }
            for (column, &v) in columns.iter_mut().zip(values) {
                column.push(v);
            }
        }
        Self::from_columns(columns)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d() {
            return Err(Error::Config(format!(
                "{} attribute names for {} attributes",
                names.len(),
                self.d()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Number of records.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of attributes.
    pub fn d(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, attr: usize) -> &[f64] {
        &self.columns[attr]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn value(&self, record: usize, attr: usize) -> f64 {
        self.columns[attr][record]
    }

    /// All attribute values of one record.
    pub fn row(&self, record: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[record]).collect()
    }

    pub fn attribute_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn stats(&self, attr: usize) -> &AttributeStats {
        &self.stats[attr]
    }

    /// Whether every value of the attribute is identical.
    pub fn is_constant(&self, attr: usize) -> bool {
        let s = &self.stats[attr];
        s.min == s.max
    }

    pub fn constant_attributes(&self) -> Vec<usize> {
        (0..self.d()).filter(|&a| self.is_constant(a)).collect()
    }

    pub fn check_record(&self, id: usize) -> Result<()> {
        if id < self.n {
            Ok(())
        } else {
            Err(Error::InvalidRecord { id, n: self.n })
        }
    }

    /// Reads a comma-separated file of reals.
    pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file, has_header)
    }

    pub fn read_csv<R: Read>(reader: R, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let names = if has_header {
            Some(rdr.headers()?.iter().map(str::to_owned).collect::<Vec<_>>())
        } else {
            None
        };

        let mut columns: Vec<Vec<f64>> = Vec::new();
        let mut record = csv::StringRecord::new();
        let mut row = 0;
        while rdr.read_record(&mut record)? {
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            if row == 0 {
                columns = vec![Vec::new(); record.len()];
            } else if record.len() != columns.len() {
                return Err(Error::RaggedRow {
                    row,
                    expected: columns.len(),
                    found: record.len(),
                });
            }
            for (column, (cell, values)) in record.iter().zip(columns.iter_mut()).enumerate() {
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    row,
                    column,
                    value: cell.to_owned(),
                })?;
                if !v.is_finite() {
                    return Err(Error::NonFinite { row, column });
                }
                values.push(v);
            }
            row += 1;
        }

        let ds = Self::from_columns(columns)?;
        match names {
            Some(names) if names.len() == ds.d() => ds.with_names(names),
            _ => Ok(ds),
        }
    }

    /// Writes the dataset as headerless CSV. Values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut out = BufWriter::new(writer);
        let mut line = String::new();
        for i in 0..self.n {
            line.clear();
            for (a, column) in self.columns.iter().enumerate() {
                if a > 0 {
                    line.push(',');
                }
                line.push_str(&column[i].to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file).map_err(|e| Error::io(path, e))
    }
}

/// Statistics of attribute `attr` of `ds`.
pub fn attribute_stats(ds: &Dataset, attr: usize) -> AttributeStats {
    *ds.stats(attr)
}
