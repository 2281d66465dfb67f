//! Dense CSV datasets.
//!
//! One instance per line, no header, comma separated, `.` as decimal
//! separator. The trailing `label_count` columns are labels and must be `0`
//! or `1`; the remaining columns are real-valued features.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use vpcme_core::{Matrix, MultiLabelDataset};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot open file")]
    Open { path: String, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Invalid(#[from] vpcme_core::Error),
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(input)
}

/// Reads every record as numbers, checking that all rows have the same width.
pub fn read_numeric_rows<R: Read>(input: R) -> Result<Vec<Vec<f64>>, IoError> {
    let mut rows = Vec::new();
    let mut width = None;
    for record in reader(input).records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(IoError::Parse {
                line,
                message: format!("expected {} fields, found {}", width.unwrap_or(0), record.len()),
            });
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| IoError::Parse {
                    line,
                    message: format!("column {}: {field:?} is not a finite number", col + 1),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Parses a dataset whose last `label_count` columns are labels.
pub fn parse_csv<R: Read>(input: R, label_count: usize) -> Result<MultiLabelDataset, IoError> {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    let mut n = 0;
    for record in reader(input).records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = |message: String| IoError::Parse { line, message };
        if label_count >= record.len() {
            return Err(parse_err(format!(
                "{} columns leave no feature columns for {label_count} labels",
                record.len()
            )));
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(parse_err(format!("expected {} fields, found {}", width.unwrap_or(0), record.len())));
        }
        let k = record.len() - label_count;
        for (col, field) in record.iter().enumerate() {
            if col < k {
                let v = field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(format!("column {}: {field:?} is not a finite number", col + 1)))?;
                features.push(v);
            } else {
                labels.push(match field {
                    "0" => false,
                    "1" => true,
                    other => return Err(parse_err(format!("column {}: label value {other:?} is not 0 or 1", col + 1))),
                });
            }
        }
        n += 1;
    }
    let k = width.map_or(0, |w| w - label_count);
    if n == 0 {
        return Err(IoError::Parse { line: 0, message: "no data rows".into() });
    }
    Ok(MultiLabelDataset::with_default_names(Matrix::from_row_major(n, k, features)?, labels, label_count)?)
}

pub fn load_csv(path: impl AsRef<Path>, label_count: usize) -> Result<MultiLabelDataset, IoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IoError::Open { path: path.display().to_string(), source })?;
    parse_csv(BufReader::new(file), label_count)
}

/// Writes a dataset in the same format `parse_csv` reads. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_csv<W: Write>(ds: &MultiLabelDataset, mut out: W) -> Result<(), IoError> {
    let mut line = String::new();
    for (x, y) in ds.features().iter_rows().zip(ds.label_rows()) {
        line.clear();
        for v in x {
            line.push_str(&v.to_string());
            line.push(',');
        }
        for (i, &b) in y.iter().enumerate() {
            line.push(if b { '1' } else { '0' });
            line.push(if i + 1 == y.len() { '\n' } else { ',' });
        }
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}
