//! Line-oriented JSON helpers shared by the corpus and definition stores.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Writes one compact JSON record per line. Returns the number of records.
pub fn write_records<T: Serialize>(path: &Path, records: &[T]) -> io::Result<usize> {
    let mut out = BufWriter::new(File::create(path)?);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(records.len())
}

/// Error raised while reading a JSONL file.
#[derive(Debug)]
pub enum ReadError {
    Io(io::Error),
    /// 1-based line number and the decoder message.
    Line(usize, String),
}

/// Reads a JSONL file, skipping blank lines. `validate` runs on every decoded
/// record so callers can attach domain checks to the reported line.
pub fn read_records<T, F>(path: &Path, mut validate: F) -> Result<Vec<T>, ReadError>
where
    T: DeserializeOwned,
    F: FnMut(&T) -> Result<(), String>,
{
    let reader = BufReader::new(File::open(path).map_err(ReadError::Io)?);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(ReadError::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T =
            serde_json::from_str(&line).map_err(|e| ReadError::Line(idx + 1, e.to_string()))?;
        validate(&record).map_err(|msg| ReadError::Line(idx + 1, msg))?;
        records.push(record);
    }
    Ok(records)
}
