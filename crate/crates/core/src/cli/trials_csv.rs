//! Trial record CSV: header `depth_m,range_m,attempts,successes`, one record
//! per row.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkmodel::TrialRecord;

pub const HEADER: &str = "depth_m,range_m,attempts,successes";

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    depth_m: f64,
    range_m: f64,
    attempts: u64,
    successes: u64,
}

pub fn read_trials<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>().join(",") != HEADER {
        // An empty file has no header at all; report it as "no records".
        if headers.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::Parse {
            line: 1,
            message: format!("header must be exactly `{HEADER}`"),
        });
    }
    let mut records = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Parse {
                line,
                message: format!("malformed trial row: {e}"),
            }
        })?;
        let line = records.len() + 2;
        let rec = TrialRecord::new(row.depth_m, row.range_m, row.attempts, row.successes)
            .map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        records.push(rec);
    }
    Ok(records)
}

pub fn write_trials<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER.split(','))
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in records {
        w.serialize(Row {
            depth_m: r.depth,
            range_m: r.range,
            attempts: r.attempts,
            successes: r.successes,
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
