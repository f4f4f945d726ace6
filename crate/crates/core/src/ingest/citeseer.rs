//! Reference dump reader: one JSON object per line,
//! `{"title": ..., "year": ..., "references": [{"title": ..., "year": ...}]}`.

use std::io::BufRead;

use super::build::RefRecord;
use crate::error::{Error, Result};

pub fn read_citeseer<R: BufRead>(input: R) -> Result<Vec<RefRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RefRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if rec.title.trim().is_empty() {
            continue;
        }
        out.push(rec);
    }
    Ok(out)
}
