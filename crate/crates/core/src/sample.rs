use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Provenance of a row in a corrupted sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Inlier,
    Outlier,
}

/// An n×d collection of real vectors, rows are samples.
///
/// Labels are optional so the same type carries real data; operations that
/// need provenance fail fast when labels are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    data: DMatrix<f64>,
    labels: Option<Vec<Label>>,
}

impl SampleSet {
    pub fn new(data: DMatrix<f64>) -> Result<Self, CoreError> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(CoreError::EmptySampleSet);
        }
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                if !data[(i, j)].is_finite() {
                    return Err(CoreError::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(Self { data, labels: None })
    }

    pub fn with_labels(data: DMatrix<f64>, labels: Vec<Label>) -> Result<Self, CoreError> {
        if labels.len() != data.nrows() {
            return Err(CoreError::LabelCountMismatch {
                labels: labels.len(),
                rows: data.nrows(),
            });
        }
        let mut s = Self::new(data)?;
        s.labels = Some(labels);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.data.row(i).transpose()
    }

    pub fn outlier_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().filter(|&&t| t == Label::Outlier).count())
    }

    /// Restriction to the given row indices, carrying labels along.
    pub fn subset(&self, indices: &[usize]) -> SampleSet {
        let data = DMatrix::from_fn(indices.len(), self.dim(), |i, j| {
            self.data[(indices[i], j)]
        });
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        SampleSet { data, labels }
    }

    /// Writes headerless CSV, one row per sample; when labels are present a
    /// final 0/1 column records them (1 = outlier).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CoreError> {
        for i in 0..self.n() {
            let mut fields: Vec<String> = (0..self.dim())
                .map(|j| format_float(self.data[(i, j)]))
                .collect();
            if let Some(labels) = &self.labels {
                fields.push(match labels[i] {
                    Label::Inlier => "0".to_string(),
                    Label::Outlier => "1".to_string(),
                });
            }
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    /// Reads headerless CSV. With `labeled`, the final column must be 0 or 1.
    ///
    /// Parse failures name the offending (1-based) line.
    pub fn read_csv<R: BufRead>(reader: R, labeled: bool) -> Result<Self, CoreError> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut labels: Vec<Label> = Vec::new();
        let mut width: Option<usize> = None;

        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut fields: Vec<f64> = Vec::new();
            for raw in trimmed.split(',') {
                let v: f64 = raw.trim().parse().map_err(|_| CoreError::CsvParse {
                    line: lineno,
                    message: format!("cannot parse {raw:?} as a number"),
                })?;
                fields.push(v);
            }
            if labeled {
                let tag = fields.pop().ok_or(CoreError::CsvParse {
                    line: lineno,
                    message: "labeled row has no columns".into(),
                })?;
                labels.push(if tag == 0.0 {
                    Label::Inlier
                } else if tag == 1.0 {
                    Label::Outlier
                } else {
                    return Err(CoreError::CsvParse {
                        line: lineno,
                        message: format!("label column must be 0 or 1, got {tag}"),
                    });
                });
            }
            match width {
                None => width = Some(fields.len()),
                Some(w) if w != fields.len() => {
                    return Err(CoreError::CsvParse {
                        line: lineno,
                        message: format!("expected {w} columns, got {}", fields.len()),
                    });
                }
                _ => {}
            }
            rows.push(fields);
        }

        let d = width.ok_or(CoreError::EmptySampleSet)?;
        let n = rows.len();
        let data = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
        if labeled {
            Self::with_labels(data, labels)
        } else {
            Self::new(data)
        }
    }
}

/// Formats a float with 17 significant digits, round-trip exact for f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
