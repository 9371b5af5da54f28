//! Plain-text record files for designs and codes.
//!
//! A file holds any number of records separated by blank lines. Lines
//! starting with `#` are comments. A design record starts with the header
//! `v b r k lambda` followed by `v` rows of `b` characters from `{0,1}`; a
//! code record starts with `n k` followed by `k` rows of `n` characters.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// One record's raw lines, with 1-based line numbers for diagnostics.
#[derive(Clone, Debug)]
pub struct RawRecord {
    pub line: usize,
    pub header: Vec<usize>,
    pub rows: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Design,
    Code,
}

impl RawRecord {
    pub fn kind(&self) -> Option<RecordKind> {
        match self.header.len() {
            5 => Some(RecordKind::Design),
            2 => Some(RecordKind::Code),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Result<BitMatrix> {
        BitMatrix::parse_rows(&self.rows).map_err(|e| self.error(e.to_string()))
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }
}

/// Splits text into records. A malformed header is reported per record, the
/// rest of the file is still returned.
pub fn split_records(text: &str) -> Vec<Result<RawRecord>> {
    let mut out = Vec::new();
    let mut current: Option<(usize, Vec<String>)> = None;
    let flush = |cur: &mut Option<(usize, Vec<String>)>, out: &mut Vec<Result<RawRecord>>| {
        if let Some((line, lines)) = cur.take() {
            out.push(parse_header(line, lines));
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut current, &mut out);
            continue;
        }
        current
            .get_or_insert_with(|| (i + 1, Vec::new()))
            .1
            .push(line.to_string());
    }
    flush(&mut current, &mut out);
    out
}

fn parse_header(line: usize, mut lines: Vec<String>) -> Result<RawRecord> {
    let header_line = lines.remove(0);
    let header = header_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse {
            line,
            message: format!("bad header {header_line:?}"),
        })?;
    let record = RawRecord {
        line,
        header,
        rows: lines,
    };
    let (rows, cols) = match record.kind() {
        Some(RecordKind::Design) => (record.header[0], record.header[1]),
        Some(RecordKind::Code) => (record.header[1], record.header[0]),
        None => {
            return Err(record.error(format!(
                "header must have 2 (code) or 5 (design) fields, found {}",
                record.header.len()
            )))
        }
    };
    if record.rows.len() != rows {
        return Err(record.error(format!("expected {rows} rows, found {}", record.rows.len())));
    }
    if let Some((i, r)) = record
        .rows
        .iter()
        .enumerate()
        .find(|(_, r)| r.len() != cols)
    {
        return Err(Error::Parse {
            line: line + 1 + i,
            message: format!("expected {cols} columns, found {}", r.len()),
        });
    }
    Ok(record)
}

pub fn write_matrix_record(header: &[usize], m: &BitMatrix) -> String {
    let mut s = String::new();
    let fields: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    writeln!(s, "{}", fields.join(" ")).unwrap();
    for line in m.to_lines() {
        writeln!(s, "{line}").unwrap();
    }
    s
}
