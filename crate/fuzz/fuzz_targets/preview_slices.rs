#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::tabular::{parse_delimited, preview_head_from, preview_tail_from, PreviewOptions};

// Previews read through small windows must agree with a full parse of
// well-formed input.
fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let n = 1 + data[0] as usize % 8;
    let opts = PreviewOptions {
        initial_window: 1 + data[1] as u64 % 32,
        max_window: 4096,
    };
    let body = data[2..].to_vec();
    if parse_delimited(&body, ',', true).is_err() {
        return;
    }
    let full = parse_delimited(&body, ',', false).expect("lenient parse accepts strict input");
    let rows = full.records();
    if let Ok(h) = preview_head_from(&body, ',', n, &opts) {
        assert_eq!(h.header, full.header());
        assert_eq!(h.rows, rows[..n.min(rows.len())]);
    }
    if let Ok(t) = preview_tail_from(&body, ',', n, &opts) {
        assert_eq!(t.rows, rows[rows.len().saturating_sub(n)..]);
    }
});
