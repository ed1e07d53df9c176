//! RFC 4180 record scanner.
//!
//! The scanner can work on a window of a larger file: with `at_eof == false`
//! a record that is not terminated inside the input (including one cut in the
//! middle of a quoted field) is left out, so callers only ever see records
//! that a full parse would also produce.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawRecord {
    pub fields: Vec<String>,
    /// Byte offset just past the record's terminator.
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(clippy::enum_variant_names)]
pub(crate) enum ScanErrorKind {
    UnterminatedQuote,
    StrayQuote,
    TextAfterQuote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ScanError {
    pub kind: ScanErrorKind,
    /// 1-based record number (the header is record 1).
    pub record: usize,
}

/// Scan `text` into records. Blank lines are skipped. Accepts `\n` and
/// `\r\n` terminators.
///
/// Strict mode rejects quotes inside unquoted fields, text after a closing
/// quote and unterminated quoted fields; lenient mode keeps such bytes
/// literally.
pub(crate) fn scan(text: &str, delim: u8, strict: bool, at_eof: bool) -> Result<Vec<RawRecord>, ScanError> {
    let b = text.as_bytes();
    let n = b.len();
    let mut pos = 0;
    let mut records = Vec::new();

    'records: while pos < n {
        match b[pos] {
            b'\n' => {
                pos += 1;
                continue;
            }
            b'\r' if pos + 1 < n && b[pos + 1] == b'\n' => {
                pos += 2;
                continue;
            }
            b'\r' if pos + 1 == n => {
                if at_eof {
                    pos += 1;
                    continue;
                }
                break;
            }
            _ => {}
        }
        let record_no = records.len() + 1;
        let err = |kind| ScanError {
            kind,
            record: record_no,
        };
        let mut fields = Vec::new();
        loop {
            let mut field: Vec<u8> = Vec::new();
            if pos < n && b[pos] == b'"' {
                pos += 1;
                loop {
                    match b[pos..].iter().position(|&c| c == b'"') {
                        None => {
                            if !at_eof {
                                break 'records;
                            }
                            if strict {
                                return Err(err(ScanErrorKind::UnterminatedQuote));
                            }
                            field.extend_from_slice(&b[pos..]);
                            pos = n;
                            break;
                        }
                        Some(rel) => {
                            let q = pos + rel;
                            field.extend_from_slice(&b[pos..q]);
                            if q + 1 < n && b[q + 1] == b'"' {
                                field.push(b'"');
                                pos = q + 2;
                                continue;
                            }
                            if q + 1 == n && !at_eof {
                                // the next byte may be the second half of an escape
                                break 'records;
                            }
                            pos = q + 1;
                            break;
                        }
                    }
                }
                if pos < n && !is_terminator(b, pos, delim) {
                    if strict {
                        return Err(err(ScanErrorKind::TextAfterQuote));
                    }
                    let stop = field_end(b, pos, delim);
                    field.extend_from_slice(&b[pos..stop]);
                    pos = stop;
                }
            } else {
                let stop = field_end(b, pos, delim);
                let raw = &b[pos..stop];
                if strict && raw.contains(&b'"') {
                    return Err(err(ScanErrorKind::StrayQuote));
                }
                field.extend_from_slice(raw);
                pos = stop;
            }
            // Splits only happen at ASCII bytes, so every field stays valid UTF-8.
            fields.push(String::from_utf8(field).expect("field boundaries are ASCII"));

            if pos >= n {
                if !at_eof {
                    break 'records;
                }
                records.push(RawRecord { fields, end: n });
                break 'records;
            }
            if b[pos] == delim {
                pos += 1;
                continue;
            }
            if b[pos] == b'\n' {
                pos += 1;
            } else if b[pos] == b'\r' {
                if pos + 1 < n {
                    pos += 2;
                } else if at_eof {
                    pos += 1;
                } else {
                    break 'records;
                }
            }
            records.push(RawRecord { fields, end: pos });
            continue 'records;
        }
    }
    Ok(records)
}

/// Delimiter, `\n`, `\r\n`, or a `\r` that ends the input.
fn is_terminator(b: &[u8], pos: usize, delim: u8) -> bool {
    match b[pos] {
        c if c == delim => true,
        b'\n' => true,
        b'\r' => pos + 1 == b.len() || b[pos + 1] == b'\n',
        _ => false,
    }
}

fn field_end(b: &[u8], from: usize, delim: u8) -> usize {
    (from..b.len()).find(|&i| is_terminator(b, i, delim)).unwrap_or(b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(text: &str, strict: bool, at_eof: bool) -> Vec<Vec<String>> {
        scan(text, b',', strict, at_eof)
            .unwrap()
            .into_iter()
            .map(|r| r.fields)
            .collect()
    }

    #[test]
    fn basic_and_quoted() {
        assert_eq!(
            fields("a,b\n1,2\n3,4", true, true),
            [["a", "b"], ["1", "2"], ["3", "4"]]
        );
        assert_eq!(fields("a,b\n\"x,y\",2\n", true, true), [["a", "b"], ["x,y", "2"]]);
        assert_eq!(fields("\"a\"\"b\",\"l1\nl2\"\r\n", true, true), [["a\"b", "l1\nl2"]]);
        assert_eq!(fields("a,\n,b\n", true, true), [["a", ""], ["", "b"]]);
        assert_eq!(fields("\"\"\n", true, true), [[""]]);
    }

    #[test]
    fn blank_lines_and_crlf() {
        assert_eq!(fields("a\r\n\r\nb\n\nc\r", true, true), [["a"], ["b"], ["c"]]);
        assert_eq!(fields("a\rb\n", true, true), [["a\rb"]]);
    }

    #[test]
    fn record_ends() {
        let recs = scan("ab,c\r\nd\n", b',', true, true).unwrap();
        assert_eq!(recs.iter().map(|r| r.end).collect::<Vec<_>>(), [6, 8]);
    }

    #[test]
    fn partial_windows_drop_cut_records() {
        assert_eq!(fields("a,b\n1,2\n3,", false, false), [["a", "b"], ["1", "2"]]);
        assert_eq!(fields("a,b\n1,\"open\nquote", false, false), [["a", "b"]]);
        assert_eq!(fields("a\n\"x\"", false, false), [["a"]]);
        assert_eq!(fields("a\r", false, false), Vec::<Vec<String>>::new());
        assert_eq!(fields("a\n", false, false), [["a"]]);
    }

    #[test]
    fn strict_errors() {
        let e = scan("a\n\"open", b',', true, true).unwrap_err();
        assert_eq!(
            e,
            ScanError {
                kind: ScanErrorKind::UnterminatedQuote,
                record: 2
            }
        );
        let e = scan("a\nb\"c\n", b',', true, true).unwrap_err();
        assert_eq!(e.kind, ScanErrorKind::StrayQuote);
        let e = scan("\"a\"b\n", b',', true, true).unwrap_err();
        assert_eq!(e.kind, ScanErrorKind::TextAfterQuote);
    }

    #[test]
    fn lenient_keeps_literals() {
        assert_eq!(fields("b\"c,\"a\"b\n", false, true), [["b\"c", "ab"]]);
        assert_eq!(fields("\"open\nrest", false, true), [["open\nrest"]]);
    }

    #[test]
    fn tab_delimiter() {
        let recs = scan("a\tb\n\"x\ty\"\t2\n", b'\t', true, true).unwrap();
        assert_eq!(recs[1].fields, ["x\ty", "2"]);
    }
}
