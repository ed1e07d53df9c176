use serde::Serialize;

/// A contiguous slice of a remote file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ByteWindow {
    offset: u64,
    total_size: u64,
    bytes: Vec<u8>,
}

impl ByteWindow {
    pub fn new(offset: u64, total_size: u64, bytes: Vec<u8>) -> Result<Self, String> {
        let end = offset
            .checked_add(bytes.len() as u64)
            .ok_or_else(|| "window end overflows".to_string())?;
        if end > total_size {
            return Err(format!(
                "window {offset}+{} exceeds total size {total_size}",
                bytes.len()
            ));
        }
        Ok(ByteWindow {
            offset,
            total_size,
            bytes,
        })
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn len(&self) -> u64 {
        self.bytes.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// Exclusive end offset.
    pub fn end(&self) -> u64 {
        self.offset + self.len()
    }

    pub fn total_size(&self) -> u64 {
        self.total_size
    }

    pub fn reaches_end(&self) -> bool {
        self.end() == self.total_size
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Parsed `Content-Range` response header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentRange {
    /// `bytes <start>-<end>/<total>`, end inclusive.
    Satisfied { start: u64, end: u64, total: u64 },
    /// `bytes */<total>`, sent with 416.
    Unsatisfied { total: u64 },
}

impl ContentRange {
    pub fn total(&self) -> u64 {
        match *self {
            ContentRange::Satisfied { total, .. } | ContentRange::Unsatisfied { total } => total,
        }
    }
}

pub fn parse_content_range(value: &str) -> Result<ContentRange, String> {
    let err = || format!("bad Content-Range {value:?}");
    let rest = value.trim().strip_prefix("bytes ").ok_or_else(err)?;
    let (span, total) = rest.split_once('/').ok_or_else(err)?;
    let total: u64 = parse_digits(total).ok_or_else(err)?;
    if span == "*" {
        return Ok(ContentRange::Unsatisfied { total });
    }
    let (start, end) = span.split_once('-').ok_or_else(err)?;
    let start = parse_digits(start).ok_or_else(err)?;
    let end = parse_digits(end).ok_or_else(err)?;
    if start > end || end >= total {
        return Err(err());
    }
    Ok(ContentRange::Satisfied { start, end, total })
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_range_forms() {
        assert_eq!(
            parse_content_range("bytes 0-9/100"),
            Ok(ContentRange::Satisfied {
                start: 0,
                end: 9,
                total: 100
            })
        );
        assert_eq!(
            parse_content_range("bytes */42"),
            Ok(ContentRange::Unsatisfied { total: 42 })
        );
        for bad in [
            "bytes 9-0/100",
            "bytes 0-100/100",
            "items 0-1/2",
            "bytes 0-1",
            "bytes -1-2/5",
            "bytes 0-1/x",
        ] {
            assert!(parse_content_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn window_invariant() {
        assert!(ByteWindow::new(90, 100, vec![0; 10]).is_ok());
        assert!(ByteWindow::new(95, 100, vec![0; 10]).is_err());
        let w = ByteWindow::new(100, 100, vec![]).unwrap();
        assert!(w.is_empty() && w.reaches_end());
    }
}
