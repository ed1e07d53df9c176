//! Head and tail previews of remote tables via byte-range reads.
//!
//! Head: fetch a growing prefix until the header and `n` complete records are
//! decoded. Tail: fetch a growing suffix and locate the first record boundary
//! inside it. A suffix may start inside a quoted field, so both quote states
//! at the window start are tried; the window is accepted only when every
//! consistent reading yields the same rows, otherwise it keeps growing until
//! it covers the whole body. For RFC 4180 input the result equals the
//! corresponding slice of a full parse.

use serde::Serialize;

use super::scan::{self, RawRecord};
use super::{delimiter_byte, fit_row, parse_delimited, ParseError, UTF8_BOM};
use crate::client::{ByteWindow, RepoClient};
use crate::error::ClientError;
use crate::model::BitstreamRef;

#[derive(Debug, thiserror::Error)]
pub enum PreviewError {
    #[error(transparent)]
    Client(#[from] ClientError),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0} is not a delimited text file")]
    NotTabular(String),

    #[error("row count must be positive")]
    ZeroRows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreviewOptions {
    /// First window size in bytes; doubled on every retry.
    pub initial_window: u64,
    /// Largest ranged window; beyond it the whole body is fetched.
    pub max_window: u64,
}

impl Default for PreviewOptions {
    fn default() -> Self {
        PreviewOptions {
            initial_window: 64 * 1024,
            max_window: 8 * 1024 * 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PreviewPosition {
    Head,
    Tail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreviewSlice {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub position: PreviewPosition,
    pub requested: usize,
    /// The file holds fewer than `requested` records.
    pub truncated_source: bool,
}

/// Random access to the bytes of one file.
pub trait ByteSource {
    /// Bytes `[offset, min(offset + length, total))`.
    fn fetch(&self, offset: u64, length: u64) -> Result<ByteWindow, ClientError>;
}

impl ByteSource for [u8] {
    fn fetch(&self, offset: u64, length: u64) -> Result<ByteWindow, ClientError> {
        let total = self.len() as u64;
        if length == 0 {
            return Err(ClientError::InvalidRange("length must be positive".into()));
        }
        if offset > total {
            return Err(ClientError::InvalidRange(format!(
                "offset {offset} beyond end of {total}-byte file"
            )));
        }
        let end = offset.saturating_add(length).min(total);
        ByteWindow::new(offset, total, self[offset as usize..end as usize].to_vec()).map_err(ClientError::Protocol)
    }
}

impl ByteSource for Vec<u8> {
    fn fetch(&self, offset: u64, length: u64) -> Result<ByteWindow, ClientError> {
        self.as_slice().fetch(offset, length)
    }
}

/// A bitstream reached through a repository client.
pub struct RemoteBitstream<'a> {
    pub client: &'a RepoClient,
    pub bitstream: &'a BitstreamRef,
}

impl ByteSource for RemoteBitstream<'_> {
    fn fetch(&self, offset: u64, length: u64) -> Result<ByteWindow, ClientError> {
        self.client.fetch_range(self.bitstream, offset, length)
    }
}

/// Delimiter for a bitstream, judged by extension then media type.
pub fn tabular_delimiter(bitstream: &BitstreamRef) -> Result<char, PreviewError> {
    match bitstream.extension().as_deref() {
        Some("csv") => return Ok(','),
        Some("tsv") | Some("tab") => return Ok('\t'),
        _ => {}
    }
    let media = bitstream.media_type.split(';').next().unwrap_or("").trim();
    match media {
        "text/csv" => Ok(','),
        "text/tab-separated-values" => Ok('\t'),
        _ => Err(PreviewError::NotTabular(bitstream.name.clone())),
    }
}

/// First `n` records of a remote table.
pub fn preview_head(client: &RepoClient, bitstream: &BitstreamRef, n: usize) -> Result<PreviewSlice, PreviewError> {
    let delimiter = tabular_delimiter(bitstream)?;
    let source = RemoteBitstream { client, bitstream };
    preview_head_from(&source, delimiter, n, &PreviewOptions::default())
}

/// Last `n` records of a remote table.
pub fn preview_tail(client: &RepoClient, bitstream: &BitstreamRef, n: usize) -> Result<PreviewSlice, PreviewError> {
    let delimiter = tabular_delimiter(bitstream)?;
    let source = RemoteBitstream { client, bitstream };
    preview_tail_from(&source, delimiter, n, &PreviewOptions::default())
}

struct Prefix {
    records: Vec<RawRecord>,
    /// Bytes skipped before the decoded text (a UTF-8 BOM).
    skipped: usize,
    total: u64,
}

fn next_window(current: u64, total: u64, opts: &PreviewOptions) -> u64 {
    if current >= opts.max_window {
        total.max(1)
    } else {
        current.saturating_mul(2).min(opts.max_window)
    }
}

/// Decode a window of UTF-8; a multi-byte sequence cut by the window end is
/// dropped unless the window reaches the end of the file.
fn decode(bytes: &[u8], at_eof: bool, base_offset: usize) -> Result<&str, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => Ok(s),
        Err(e) if e.error_len().is_none() && !at_eof => {
            Ok(std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix"))
        }
        Err(e) => Err(ParseError::Encoding {
            offset: base_offset + e.valid_up_to(),
        }),
    }
}

/// Fetch prefixes until `want` complete records are decoded or the file ends.
fn scan_prefix(src: &dyn ByteSource, delim: u8, want: usize, opts: &PreviewOptions) -> Result<Prefix, PreviewError> {
    let mut window = opts.initial_window.max(1);
    loop {
        let win = src.fetch(0, window)?;
        let at_eof = win.reaches_end();
        let bytes = win.bytes();
        let skipped = if bytes.starts_with(UTF8_BOM) { UTF8_BOM.len() } else { 0 };
        let text = decode(&bytes[skipped..], at_eof, skipped)?;
        let records = scan::scan(text, delim, false, at_eof).map_err(ParseError::from)?;
        if records.len() >= want || at_eof {
            return Ok(Prefix {
                records,
                skipped,
                total: win.total_size(),
            });
        }
        window = next_window(window, win.total_size(), opts);
    }
}

pub fn preview_head_from(
    src: &dyn ByteSource,
    delimiter: char,
    n: usize,
    opts: &PreviewOptions,
) -> Result<PreviewSlice, PreviewError> {
    if n == 0 {
        return Err(PreviewError::ZeroRows);
    }
    let delim = delimiter_byte(delimiter)?;
    let prefix = scan_prefix(src, delim, n + 1, opts)?;
    let mut records = prefix.records.into_iter();
    let header = records.next().ok_or(ParseError::EmptyInput)?.fields;
    let rows: Vec<Vec<String>> = records
        .take(n)
        .map(|r| {
            let mut row = r.fields;
            fit_row(&mut row, header.len());
            row
        })
        .collect();
    Ok(PreviewSlice {
        truncated_source: rows.len() < n,
        header,
        rows,
        position: PreviewPosition::Head,
        requested: n,
    })
}

pub fn preview_tail_from(
    src: &dyn ByteSource,
    delimiter: char,
    n: usize,
    opts: &PreviewOptions,
) -> Result<PreviewSlice, PreviewError> {
    if n == 0 {
        return Err(PreviewError::ZeroRows);
    }
    let delim = delimiter_byte(delimiter)?;
    let prefix = scan_prefix(src, delim, 1, opts)?;
    let first = prefix.records.first().ok_or(ParseError::EmptyInput)?;
    let header = first.fields.clone();
    let header_end = (prefix.skipped + first.end) as u64;
    let total = prefix.total;

    let mut window = opts.initial_window.max(1);
    let rows = loop {
        let start = total.saturating_sub(window);
        if start <= header_end {
            break tail_of_full_parse(src, delimiter, total, n)?;
        }
        let win = src.fetch(start, total - start)?;
        if let Some(rows) = resolve_suffix(win.bytes(), delim, header.len(), n) {
            break rows;
        }
        window = next_window(window, total, opts);
    };
    Ok(PreviewSlice {
        truncated_source: rows.len() < n,
        header,
        rows,
        position: PreviewPosition::Tail,
        requested: n,
    })
}

fn tail_of_full_parse(
    src: &dyn ByteSource,
    delimiter: char,
    total: u64,
    n: usize,
) -> Result<Vec<Vec<String>>, PreviewError> {
    let bytes = src.fetch(0, total.max(1))?.into_bytes();
    let table = parse_delimited(&bytes, delimiter, false)?;
    let records = table.records();
    Ok(records[records.len().saturating_sub(n)..].to_vec())
}

/// Last `n` rows of a suffix window, or `None` when the window does not pin
/// them down unambiguously.
fn resolve_suffix(bytes: &[u8], delim: u8, width: usize, n: usize) -> Option<Vec<Vec<String>>> {
    let mut readings: Vec<Vec<Vec<String>>> = Vec::with_capacity(2);
    for starts_quoted in [false, true] {
        let Some(boundary) = first_boundary(bytes, starts_quoted) else {
            continue;
        };
        let Ok(text) = std::str::from_utf8(&bytes[boundary..]) else {
            continue;
        };
        let Ok(records) = scan::scan(text, delim, true, true) else {
            continue;
        };
        if records.iter().any(|r| r.fields.len() != width) {
            continue;
        }
        if records.len() < n {
            return None;
        }
        let tail = records[records.len() - n..].iter().map(|r| r.fields.clone()).collect();
        readings.push(tail);
    }
    let first = readings.first()?;
    readings.iter().all(|r| r == first).then(|| first.clone())
}

/// Offset just past the first newline outside quotes, given the quote state
/// at offset 0. Doubled quotes toggle twice, so parity is enough.
fn first_boundary(bytes: &[u8], starts_quoted: bool) -> Option<usize> {
    let mut quoted = starts_quoted;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'"' => quoted = !quoted,
            b'\n' if !quoted => return Some(i + 1),
            _ => {}
        }
    }
    None
}
