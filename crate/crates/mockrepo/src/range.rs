/// A single byte range from a `Range` request header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeSpec {
    /// `bytes=<first>-<last>`; `last` absent for an open-ended range.
    From { first: u64, last: Option<u64> },
    /// `bytes=-<n>`: the final `n` bytes.
    Suffix(u64),
}

impl RangeSpec {
    /// Inclusive `(start, end)` within a body of `total` bytes, or `None`
    /// when the range cannot be satisfied.
    pub fn resolve(&self, total: u64) -> Option<(u64, u64)> {
        match *self {
            RangeSpec::From { first, last } => {
                if first >= total {
                    return None;
                }
                let end = last.map_or(total - 1, |l| l.min(total - 1));
                Some((first, end))
            }
            RangeSpec::Suffix(0) => None,
            RangeSpec::Suffix(n) => {
                if total == 0 {
                    return None;
                }
                Some((total.saturating_sub(n), total - 1))
            }
        }
    }
}

/// Parse a `Range` header value. Only single `bytes` ranges are
/// understood; anything else is `None` and the header is ignored.
pub fn parse_range_header(value: &str) -> Option<RangeSpec> {
    let spec = value.trim().strip_prefix("bytes=")?.trim();
    if spec.contains(',') {
        return None;
    }
    let (a, b) = spec.split_once('-')?;
    let (a, b) = (a.trim(), b.trim());
    let num = |s: &str| -> Option<u64> {
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    if a.is_empty() {
        return num(b).map(RangeSpec::Suffix);
    }
    let first = num(a)?;
    if b.is_empty() {
        return Some(RangeSpec::From { first, last: None });
    }
    let last = num(b)?;
    if last < first {
        return None;
    }
    Some(RangeSpec::From {
        first,
        last: Some(last),
    })
}
