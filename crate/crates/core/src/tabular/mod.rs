//! Delimited text tables: parsing, remote head/tail preview and conversion.

mod convert;
mod preview;
mod scan;

use serde::Serialize;

pub use convert::{convert, read_table, ConvertError, TableFormat};
pub use preview::{
    preview_head, preview_head_from, preview_tail, preview_tail_from, tabular_delimiter, ByteSource, PreviewError,
    PreviewOptions, PreviewPosition, PreviewSlice, RemoteBitstream,
};

use crate::profile::{infer_column_type, InferredType, DEFAULT_NUMERIC_THRESHOLD};
use scan::{ScanError, ScanErrorKind};

const UTF8_BOM: &[u8] = b"\xEF\xBB\xBF";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("input is not valid UTF-8 (first bad byte at offset {offset})")]
    Encoding { offset: usize },

    #[error("input contains no records")]
    EmptyInput,

    #[error("record {record} has {found} fields, header has {expected}")]
    RaggedRow {
        record: usize,
        expected: usize,
        found: usize,
    },

    #[error("record {record}: quoted field is never closed")]
    UnterminatedQuote { record: usize },

    #[error("record {record}: quote inside an unquoted field")]
    StrayQuote { record: usize },

    #[error("record {record}: text after closing quote")]
    TextAfterQuote { record: usize },

    #[error("unsupported delimiter {0:?}")]
    InvalidDelimiter(char),
}

impl From<ScanError> for ParseError {
    fn from(e: ScanError) -> Self {
        let record = e.record;
        match e.kind {
            ScanErrorKind::UnterminatedQuote => ParseError::UnterminatedQuote { record },
            ScanErrorKind::StrayQuote => ParseError::StrayQuote { record },
            ScanErrorKind::TextAfterQuote => ParseError::TextAfterQuote { record },
        }
    }
}

/// A parsed table. Every record has exactly as many cells as the header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableData {
    header: Vec<String>,
    records: Vec<Vec<String>>,
    column_types: Vec<InferredType>,
    /// Rows padded or truncated to the header width by a lenient parse.
    adjusted_rows: usize,
}

impl TableData {
    /// Build a table from already split cells; fails on ragged rows.
    pub fn new(header: Vec<String>, records: Vec<Vec<String>>) -> Result<Self, ParseError> {
        if let Some((i, r)) = records.iter().enumerate().find(|(_, r)| r.len() != header.len()) {
            return Err(ParseError::RaggedRow {
                record: i + 2,
                expected: header.len(),
                found: r.len(),
            });
        }
        Ok(Self::from_parts(header, records, 0))
    }

    fn from_parts(header: Vec<String>, records: Vec<Vec<String>>, adjusted_rows: usize) -> Self {
        let column_types = (0..header.len())
            .map(|c| {
                let cells: Vec<&str> = records.iter().map(|r| r[c].as_str()).collect();
                infer_column_type(&cells, DEFAULT_NUMERIC_THRESHOLD)
            })
            .collect();
        TableData {
            header,
            records,
            column_types,
            adjusted_rows,
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn records(&self) -> &[Vec<String>] {
        &self.records
    }

    pub fn column_types(&self) -> &[InferredType] {
        &self.column_types
    }

    pub fn adjusted_rows(&self) -> usize {
        self.adjusted_rows
    }

    pub fn row_count(&self) -> usize {
        self.records.len()
    }

    /// Cells of column `index`, top to bottom.
    pub fn column(&self, index: usize) -> impl Iterator<Item = &str> + '_ {
        self.records.iter().map(move |r| r[index].as_str())
    }
}

pub(crate) fn delimiter_byte(delimiter: char) -> Result<u8, ParseError> {
    match delimiter {
        '"' | '\r' | '\n' => Err(ParseError::InvalidDelimiter(delimiter)),
        c if c.is_ascii() => Ok(c as u8),
        c => Err(ParseError::InvalidDelimiter(c)),
    }
}

/// Pad short rows with empty cells and cut long ones to `width`.
/// Returns whether the row was changed.
pub(crate) fn fit_row(row: &mut Vec<String>, width: usize) -> bool {
    if row.len() == width {
        return false;
    }
    row.resize(width, String::new());
    true
}

/// Parse a whole delimited document; the first record is the header.
///
/// Strict mode rejects ragged rows and quoting that does not follow
/// RFC 4180. Lenient mode pads or truncates rows to the header width
/// (counted in [`TableData::adjusted_rows`]) and keeps stray quotes as text.
pub fn parse_delimited(bytes: &[u8], delimiter: char, strict: bool) -> Result<TableData, ParseError> {
    let delim = delimiter_byte(delimiter)?;
    let bytes = bytes.strip_prefix(UTF8_BOM).unwrap_or(bytes);
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::Encoding {
        offset: e.valid_up_to(),
    })?;
    let mut raw = scan::scan(text, delim, strict, true)?.into_iter();
    let header = raw.next().ok_or(ParseError::EmptyInput)?.fields;
    let width = header.len();
    let mut records = Vec::new();
    let mut adjusted = 0;
    for (i, r) in raw.enumerate() {
        let mut row = r.fields;
        if strict && row.len() != width {
            return Err(ParseError::RaggedRow {
                record: i + 2,
                expected: width,
                found: row.len(),
            });
        }
        if fit_row(&mut row, width) {
            adjusted += 1;
        }
        records.push(row);
    }
    Ok(TableData::from_parts(header, records, adjusted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_delimited(b"a,b\n1,2\n3,4", ',', true).unwrap();
        assert_eq!(t.header(), ["a", "b"]);
        assert_eq!(t.records(), [["1", "2"], ["3", "4"]]);
        assert_eq!(t.column_types(), [InferredType::Integer, InferredType::Integer]);

        let t = parse_delimited(b"a,b\n\"x,y\",2", ',', true).unwrap();
        assert_eq!(t.records()[0][0], "x,y");

        assert_eq!(
            parse_delimited(b"a,b\n1", ',', true),
            Err(ParseError::RaggedRow {
                record: 2,
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn lenient_pads_and_truncates() {
        let t = parse_delimited(b"a,b\n1\n1,2,3\n", ',', false).unwrap();
        assert_eq!(t.records(), [["1", ""], ["1", "2"]]);
        assert_eq!(t.adjusted_rows(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_delimited(b"", ',', true), Err(ParseError::EmptyInput));
        assert_eq!(parse_delimited(b"\n\r\n", ',', false), Err(ParseError::EmptyInput));
        assert_eq!(
            parse_delimited(b"a\n\xff", ',', true),
            Err(ParseError::Encoding { offset: 2 })
        );
        assert!(matches!(
            parse_delimited(b"a", '"', true),
            Err(ParseError::InvalidDelimiter('"'))
        ));
        assert!(matches!(
            parse_delimited(b"a", 'ä', true),
            Err(ParseError::InvalidDelimiter(_))
        ));
    }

    #[test]
    fn bom_is_skipped() {
        let t = parse_delimited(b"\xEF\xBB\xBFa,b\n1,2\n", ',', true).unwrap();
        assert_eq!(t.header(), ["a", "b"]);
    }

    #[test]
    fn header_only() {
        let t = parse_delimited(b"a;b\n", ';', true).unwrap();
        assert_eq!(t.row_count(), 0);
        assert_eq!(t.column_types(), [InferredType::Text, InferredType::Text]);
    }
}
