use std::io::{Read, Write};

use thiserror::Error;

use super::{FeatureVector, FEATURE_COUNT};
use crate::classify::Label;

pub const MATRIX_HEADER: [&str; 1 + FEATURE_COUNT] = ["id", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"];

/// One row of a feature matrix file. `label` is only present in labeled sets,
/// and may be empty there too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRow {
    pub id: String,
    pub vector: FeatureVector,
    pub label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub reason: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("feature matrix: {0}")]
    Csv(#[from] csv::Error),
    #[error("feature matrix header must be `id,f1,...,f9[,label]`, got `{0}`")]
    BadHeader(String),
}

/// Parses a feature matrix. Malformed rows are skipped and reported; an empty
/// input is an empty matrix.
pub fn read_matrix<R: Read>(reader: R) -> Result<(Vec<FeatureRow>, Vec<RowError>), MatrixError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = csv.records();

    let header = match records.next() {
        None => return Ok((Vec::new(), Vec::new())),
        Some(record) => record?,
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    let labeled = match names.len() {
        n if n == MATRIX_HEADER.len() => false,
        n if n == MATRIX_HEADER.len() + 1 && names[n - 1] == "label" => true,
        _ => return Err(MatrixError::BadHeader(names.join(","))),
    };
    if names[..MATRIX_HEADER.len()] != MATRIX_HEADER {
        return Err(MatrixError::BadHeader(names.join(",")));
    }

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(err) => {
                let line = err.position().map_or(0, |p| p.line());
                errors.push(RowError {
                    line,
                    reason: err.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        match parse_row(&record, labeled) {
            Ok(row) => rows.push(row),
            Err(reason) => errors.push(RowError { line, reason }),
        }
    }
    Ok((rows, errors))
}

fn parse_row(record: &csv::StringRecord, labeled: bool) -> Result<FeatureRow, String> {
    let expected = MATRIX_HEADER.len() + usize::from(labeled);
    if record.len() != expected {
        return Err(format!("expected {expected} columns, found {}", record.len()));
    }
    let id = record[0].trim();
    if id.is_empty() {
        return Err("empty id".into());
    }
    let mut bits = [false; FEATURE_COUNT];
    for (i, bit) in bits.iter_mut().enumerate() {
        *bit = match record[i + 1].trim() {
            "0" => false,
            "1" => true,
            other => return Err(format!("f{} must be 0 or 1, found `{other}`", i + 1)),
        };
    }
    let label = if labeled {
        match record[expected - 1].trim() {
            "" => None,
            text => Some(Label::parse(text).ok_or_else(|| format!("unknown label `{text}`"))?),
        }
    } else {
        None
    };
    Ok(FeatureRow {
        id: id.to_owned(),
        vector: FeatureVector::new(bits),
        label,
    })
}

/// Writes rows with the standard header, adding a `label` column when asked.
pub fn write_matrix<W: Write>(writer: W, rows: &[FeatureRow], with_labels: bool) -> Result<(), MatrixError> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = MATRIX_HEADER.to_vec();
    if with_labels {
        header.push("label");
    }
    csv.write_record(&header)?;
    for row in rows {
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        record.push(row.id.clone());
        record.extend(row.vector.bits().iter().map(u8::to_string));
        if with_labels {
            record.push(row.label.map_or(String::new(), |l| l.as_str().to_owned()));
        }
        csv.write_record(&record)?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}
