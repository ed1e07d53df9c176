//! Conversion between CSV, TSV, JSON and NDJSON.
//!
//! Cells stay text throughout: JSON output maps header names to string
//! values, and rows and columns are never reordered.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use super::{parse_delimited, ParseError, TableData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
    Json,
    Ndjson,
}

impl TableFormat {
    pub fn from_extension(path: &str) -> Option<TableFormat> {
        let ext = path.rsplit_once('.')?.1.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(TableFormat::Csv),
            "tsv" | "tab" => Some(TableFormat::Tsv),
            "json" => Some(TableFormat::Json),
            "ndjson" | "jsonl" => Some(TableFormat::Ndjson),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Tsv => "tsv",
            TableFormat::Json => "json",
            TableFormat::Ndjson => "ndjson",
        }
    }
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "tsv" => Ok(TableFormat::Tsv),
            "json" => Ok(TableFormat::Json),
            "ndjson" => Ok(TableFormat::Ndjson),
            other => Err(format!("unknown table format {other:?}")),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConvertError {
    #[error("column name {0:?} appears more than once; JSON objects need unique keys")]
    DuplicateHeader(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid JSON table: {0}")]
    Json(String),
}

pub fn convert(table: &TableData, target: TableFormat) -> Result<Vec<u8>, ConvertError> {
    let out = match target {
        TableFormat::Csv => write_delimited(table, b','),
        TableFormat::Tsv => write_delimited(table, b'\t'),
        TableFormat::Json => {
            check_unique_header(table)?;
            let objects: Vec<String> = table.records().iter().map(|r| json_object(table.header(), r)).collect();
            format!("[{}]", objects.join(","))
        }
        TableFormat::Ndjson => {
            check_unique_header(table)?;
            let mut out = String::new();
            for r in table.records() {
                out.push_str(&json_object(table.header(), r));
                out.push('\n');
            }
            out
        }
    };
    Ok(out.into_bytes())
}

fn check_unique_header(table: &TableData) -> Result<(), ConvertError> {
    let mut seen = HashSet::new();
    for h in table.header() {
        if !seen.insert(h.as_str()) {
            return Err(ConvertError::DuplicateHeader(h.clone()));
        }
    }
    Ok(())
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_object(header: &[String], row: &[String]) -> String {
    let pairs: Vec<String> = header
        .iter()
        .zip(row)
        .map(|(k, v)| format!("{}:{}", json_string(k), json_string(v)))
        .collect();
    format!("{{{}}}", pairs.join(","))
}

fn write_delimited(table: &TableData, delim: u8) -> String {
    let mut out = String::new();
    write_record(&mut out, table.header(), delim);
    for r in table.records() {
        write_record(&mut out, r, delim);
    }
    out
}

fn write_record(out: &mut String, cells: &[String], delim: u8) {
    // A lone empty cell would print as a blank line, which parsers skip.
    let lone_empty = cells.len() == 1 && cells[0].is_empty();
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            out.push(delim as char);
        }
        let needs_quotes = lone_empty
            || cell
                .bytes()
                .any(|b| b == delim || b == b'"' || b == b'\n' || b == b'\r');
        if needs_quotes {
            out.push('"');
            out.push_str(&cell.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(cell);
        }
    }
    out.push('\n');
}

/// Read a table in any supported format. Delimited input is parsed
/// leniently; JSON input must be an array of flat objects sharing one key
/// set (the first object fixes the column order).
pub fn read_table(bytes: &[u8], format: TableFormat) -> Result<TableData, ConvertError> {
    match format {
        TableFormat::Csv => Ok(parse_delimited(bytes, ',', false)?),
        TableFormat::Tsv => Ok(parse_delimited(bytes, '\t', false)?),
        TableFormat::Json => {
            let value: Value = serde_json::from_slice(bytes).map_err(|e| ConvertError::Json(e.to_string()))?;
            let Value::Array(items) = value else {
                return Err(ConvertError::Json("top level must be an array".into()));
            };
            objects_to_table(items)
        }
        TableFormat::Ndjson => {
            let text = std::str::from_utf8(bytes).map_err(|e| ParseError::Encoding {
                offset: e.valid_up_to(),
            })?;
            let mut items = Vec::new();
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let v: Value =
                    serde_json::from_str(line).map_err(|e| ConvertError::Json(format!("line {}: {e}", i + 1)))?;
                items.push(v);
            }
            objects_to_table(items)
        }
    }
}

fn objects_to_table(items: Vec<Value>) -> Result<TableData, ConvertError> {
    let mut header: Option<Vec<String>> = None;
    let mut records = Vec::with_capacity(items.len());
    for (i, item) in items.into_iter().enumerate() {
        let Value::Object(map) = item else {
            return Err(ConvertError::Json(format!("element {i} is not an object")));
        };
        let header = header.get_or_insert_with(|| map.keys().cloned().collect());
        if map.len() != header.len() || !header.iter().all(|k| map.contains_key(k)) {
            return Err(ConvertError::Json(format!("element {i} has a different set of keys")));
        }
        let mut row = Vec::with_capacity(header.len());
        for key in header.iter() {
            row.push(match &map[key] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                Value::Bool(b) => b.to_string(),
                Value::Number(n) => n.to_string(),
                Value::Array(_) | Value::Object(_) => {
                    return Err(ConvertError::Json(format!(
                        "element {i}, key {key:?}: nested values are not tabular"
                    )))
                }
            });
        }
        records.push(row);
    }
    let header = header.ok_or(ParseError::EmptyInput)?;
    Ok(TableData::new(header, records)?)
}
