//! JSON and CSV encodings of finite metric spaces.
//!
//! JSON: `{"schema": 1, "labels": [...], "dist": [[...], ...]}`, row-major,
//! full matrix. `schema` and `labels` are optional on input. CSV: a square
//! matrix with no header. Both readers validate on load.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{default_labels, FiniteMetricSpace, MetricError};

/// Schema version stamped into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error on {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV cell {row},{col} is not a number: {value:?}")]
    CsvNumber { row: usize, col: usize, value: String },
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("invalid metric: {0}")]
    Metric(#[from] MetricError),
}

#[derive(Debug, Serialize, Deserialize)]
struct SpaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    dist: Vec<Vec<f64>>,
}

pub fn space_from_json(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let file: SpaceFile = serde_json::from_str(text)?;
    space_from_value(file)
}

/// Parses a space embedded in a larger JSON document.
pub fn space_from_json_value(value: serde_json::Value) -> Result<FiniteMetricSpace, IoError> {
    space_from_value(serde_json::from_value(value)?)
}

fn space_from_value(file: SpaceFile) -> Result<FiniteMetricSpace, IoError> {
    if let Some(v) = file.schema {
        if v != SCHEMA_VERSION {
            return Err(IoError::Schema(v));
        }
    }
    let labels = file
        .labels
        .unwrap_or_else(|| default_labels(file.dist.len()));
    Ok(FiniteMetricSpace::with_labels(labels, file.dist)?)
}

pub fn space_to_json_value(space: &FiniteMetricSpace) -> serde_json::Value {
    serde_json::to_value(SpaceFile {
        schema: Some(SCHEMA_VERSION),
        labels: Some(space.labels().to_vec()),
        dist: space.to_rows(),
    })
    .expect("space serialises")
}

pub fn space_to_json(space: &FiniteMetricSpace) -> String {
    serde_json::to_string_pretty(&space_to_json_value(space)).expect("space serialises")
}

pub fn space_from_csv(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                cell.parse::<f64>().map_err(|_| IoError::CsvNumber {
                    row,
                    col,
                    value: cell.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(values);
    }
    Ok(FiniteMetricSpace::validate(rows)?)
}

pub fn space_to_csv(space: &FiniteMetricSpace) -> String {
    let mut out = String::new();
    for i in 0..space.len() {
        let row: Vec<String> = space.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a space, choosing CSV for `.csv` paths and JSON otherwise.
pub fn read_space(path: impl AsRef<Path>) -> Result<FiniteMetricSpace, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if is_csv(path) {
        space_from_csv(&text)
    } else {
        space_from_json(&text)
    }
}

pub fn write_space(path: impl AsRef<Path>, space: &FiniteMetricSpace) -> Result<(), IoError> {
    let path = path.as_ref();
    let text = if is_csv(path) {
        space_to_csv(space)
    } else {
        space_to_json(space) + "\n"
    };
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_labels() {
        let x = FiniteMetricSpace::with_labels(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 0.25], vec![0.25, 0.0]],
        )
        .unwrap();
        let text = space_to_json(&x);
        assert!(text.contains("\"schema\": 1"));
        assert_eq!(space_from_json(&text).unwrap(), x);
    }

    #[test]
    fn json_labels_are_optional() {
        let x = space_from_json(r#"{"dist": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(x.labels(), ["x00", "x01"]);
    }

    #[test]
    fn readers_validate() {
        let err = space_from_json(r#"{"dist": [[0, 1], [2, 0]]}"#).unwrap_err();
        assert!(matches!(
            err,
            IoError::Metric(MetricError::AsymmetricMatrix(0, 1))
        ));
        let err = space_from_csv("0,1,3\n1,0,1\n3,1,0\n").unwrap_err();
        assert!(matches!(
            err,
            IoError::Metric(MetricError::TriangleViolation(0, 2, 1))
        ));
        assert!(matches!(
            space_from_json(r#"{"schema": 9, "dist": [[0]]}"#),
            Err(IoError::Schema(9))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let x = space_from_csv("0, 1.5\n1.5, 0\n").unwrap();
        assert_eq!(x.d(0, 1), 1.5);
        assert_eq!(space_from_csv(&space_to_csv(&x)).unwrap().matrix(), x.matrix());
        assert!(matches!(
            space_from_csv("0,a\na,0\n"),
            Err(IoError::CsvNumber { .. })
        ));
    }
}
