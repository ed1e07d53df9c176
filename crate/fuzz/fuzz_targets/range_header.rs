#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_mockrepo::parse_range_header;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Some(spec) = parse_range_header(text) {
        for total in [0, 1, 10, 1364] {
            if let Some((start, end)) = spec.resolve(total) {
                assert!(start <= end && end < total);
            }
        }
    }
});
