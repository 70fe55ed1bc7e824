//! JSON-lines persistence: one `{"id": ..., "weights": [...]}` object per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Deserialize;

use super::{check_weights, Dataset, TopicDistribution};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct Record {
    id: String,
    weights: Vec<f64>,
}

/// Reads a dataset. Blank lines are skipped and an empty file yields an
/// empty dataset.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut docs: Vec<TopicDistribution> = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| Error::MalformedRecord {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let record: Record = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        if let Some(first) = docs.first() {
            if record.weights.len() != first.dim() {
                return Err(Error::DimensionMismatch {
                    path: path.to_path_buf(),
                    line: line_no,
                    expected: first.dim(),
                    found: record.weights.len(),
                });
            }
        }
        check_weights(&record.weights)
            .map_err(|v| malformed(format!("document {:?}: {v}", record.id)))?;
        docs.push(TopicDistribution::new_unchecked(record.id, record.weights));
    }
    Dataset::new(docs)
}

/// Writes a dataset, replacing any existing file at `path`.
pub fn save_dataset(path: impl AsRef<Path>, dataset: &Dataset) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for doc in dataset {
        let line = serde_json::to_string(doc)
            .map_err(|e| Error::invalid(format!("document {:?}: {e}", doc.id())))?;
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
