#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::tabular::parse_delimited;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, body)) = data.split_first() else { return };
    let delimiter = [',', '\t', ';'][sel as usize % 3];
    let strict = sel & 0x80 != 0;
    if let Ok(t) = parse_delimited(body, delimiter, strict) {
        for row in t.records() {
            assert_eq!(row.len(), t.header().len());
        }
    }
});
